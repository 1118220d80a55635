use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvtrans::feasibility::{common_point_gap, nearest_in_hull, HullSystem};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(70_003);
    for case in 0..1000 {
        let m = rng.gen_range(1..=3);
        let hull_count = rng.gen_range(2..=4);
        let hulls: Vec<DMatrix<f64>> = (0..hull_count)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                DMatrix::from_fn(m, n, |_, _| rng.gen_range(-3.0..3.0))
            })
            .collect();
        let _target: usize = rng.gen_range(0..hull_count);
        let _extra = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-3.0..3.0));
        let t = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-2.0..2.0));
        if case != 303 { continue; }
        println!("m={m} hulls: {:?}", hulls.iter().map(|h| h.ncols()).collect::<Vec<_>>());
        let system = HullSystem::new(m, hulls.clone()).unwrap();
        let base = common_point_gap(&system);
        println!("base gap {:.9e} witness {:?}", base.gap, base.witness_point.as_slice());
        // re-evaluate at base witness on the base system
        let gap_at_base: f64 = hulls.iter().map(|h| {
            let (q, _) = nearest_in_hull(h, &base.witness_point);
            (q - &base.witness_point).norm_squared()
        }).sum();
        println!("gap_at(base witness, base system) = {:.9e}", gap_at_base);
        let moved: Vec<DMatrix<f64>> = hulls.iter().map(|h| {
            let cols: Vec<DVector<f64>> = h.column_iter().map(|c| c + &t).collect();
            DMatrix::from_columns(&cols)
        }).collect();
        let moved_res = common_point_gap(&HullSystem::new(m, moved.clone()).unwrap());
        println!("moved gap {:.9e}", moved_res.gap);
        let tw = &base.witness_point + &t;
        let gap_at: f64 = moved.iter().map(|h| {
            let (q, _) = nearest_in_hull(h, &tw);
            (q - &tw).norm_squared()
        }).sum();
        println!("gap_at(translated witness, moved system) = {:.9e}", gap_at);
        break;
    }
}
