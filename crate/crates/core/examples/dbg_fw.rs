use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvtrans::feasibility::nearest_in_hull;

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
        let _tg: usize = rng.gen_range(0..hull_count);
        let _extra = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-3.0..3.0));
        let _t = DVector::<f64>::from_fn(m, |_, _| rng.gen_range(-2.0..2.0));
        if case != 303 { continue; }
        let p = DVector::from_column_slice(&[1.16203696974973f64, 0.044120815272774144]);
        for (j, h) in hulls.iter().enumerate() {
            let (q, w) = nearest_in_hull(h, &p);
            let f = (&q - &p).norm_squared();
            // brute force check on a fine simplex grid for n<=4
            let n = h.ncols();
            let mut best = f64::INFINITY;
            let steps = 120;
            if n == 4 {
                for a in 0..=steps { for b in 0..=steps-a { for c in 0..=steps-a-b {
                    let d = steps - a - b - c;
                    let wts = [a as f64, b as f64, c as f64, d as f64].map(|x| x / steps as f64);
                    let x = h * DVector::from_column_slice(&wts);
                    best = best.min((&x - &p).norm_squared());
                }}}
            }
            println!("hull {j}: n={n} f={f:.9e} grid best={best:.9e} w={w:?}");
        }
        break;
    }
}
