use tvtrans::config::Tolerances;
use tvtrans::geom::Subspace;
use tvtrans::instances::{gen_gadget, GadgetSpec};
use tvtrans::solver::{solve_detailed, SolverConfig};

fn main() {
    let tols = Tolerances::default();
    for (d, k) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2), (4, 3)] {
        let t0 = std::time::Instant::now();
        let (instance, known) = gen_gadget(&GadgetSpec::standard(d, k).unwrap()).unwrap();
        let mut cfg = SolverConfig::default();
        cfg.seed = 42;
        match solve_detailed(&instance, &cfg) {
            Ok(solved) => {
                let cert = &solved.certificate;
                let m = d - k;
                let found_cols: Vec<_> = (0..m).map(|j| {
                    nalgebra::DVector::from_iterator(d, (0..d).map(|i| tvtrans::scalar::rat_to_f64(&cert.l_basis[(i, j)])))
                }).collect();
                let known_cols: Vec<_> = (0..m).map(|j| {
                    nalgebra::DVector::from_iterator(d, (0..d).map(|i| tvtrans::scalar::rat_to_f64(&known.l_basis[(i, j)])))
                }).collect();
                let found_sub = Subspace::orthonormalize(&found_cols, &tols).unwrap();
                let known_sub = Subspace::orthonormalize(&known_cols, &tols).unwrap();
                let dist = found_sub.distance(&known_sub);
                let parts_match = cert.bipartitions.splits.iter().zip(&known.bipartitions.splits)
                    .all(|(a, b)| a.same_split(b));
                println!("({d},{k}): residual {:.2e}, subspace dist {:.2e}, parts match {}, restarts {}, {:.2}s",
                    cert.residual, dist, parts_match, solved.restarts_used, t0.elapsed().as_secs_f64());
            }
            Err(e) => println!("({d},{k}): FAILED {e}  [{:.2}s]", t0.elapsed().as_secs_f64()),
        }
    }
}
