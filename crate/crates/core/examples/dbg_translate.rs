use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvtrans::feasibility::{common_point_gap, HullSystem};

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
        let target = rng.gen_range(0..hull_count);
        let _extra = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-3.0..3.0));
        let _ = target;
        let t = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-2.0..2.0));
        if case != 379 { continue; }
        let system = HullSystem::new(m, hulls.clone()).unwrap();
        let base = common_point_gap(&system);
        let moved: Vec<DMatrix<f64>> = hulls.iter().map(|h| {
            let cols: Vec<DVector<f64>> = h.column_iter().map(|c| c + &t).collect();
            DMatrix::from_columns(&cols)
        }).collect();
        let moved_res = common_point_gap(&HullSystem::new(m, moved).unwrap());
        println!("case {case}: m={m} hulls={hull_count} sizes={:?}", hulls.iter().map(|h| h.ncols()).collect::<Vec<_>>());
        println!("  gap base  = {:.6e}", base.gap);
        println!("  gap moved = {:.6e}", moved_res.gap);
        println!("  witness base  = {:?}", base.witness_point.as_slice());
        println!("  witness moved-t = {:?}", (&moved_res.witness_point - &t).as_slice());
        println!("  drift = {:.3e}", (moved_res.witness_point - (&base.witness_point + &t)).norm());
    }
}
