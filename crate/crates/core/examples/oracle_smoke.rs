use tvtrans::instances::{gen_random, Distribution};
use tvtrans::solver::{brute_oracle, solve, SolverConfig};

fn main() {
    let t0 = std::time::Instant::now();
    for trial in 0..5u64 {
        let inst = gen_random(2, 1, Distribution::UnitCube, 1000 + trial).unwrap();
        let oracle = brute_oracle(&inst, 4096).unwrap();
        let mut cfg = SolverConfig::default();
        cfg.seed = trial;
        let cert = solve(&inst, &cfg).unwrap();
        println!(
            "trial {trial}: oracle gap {:.3e}, solve residual {:.3e}, combos match {}",
            oracle.gap,
            cert.residual,
            oracle
                .bipartition
                .splits
                .iter()
                .zip(&cert.bipartitions.splits)
                .all(|(a, b)| a.same_split(b))
        );
    }
    println!("total {:.2}s", t0.elapsed().as_secs_f64());
}
