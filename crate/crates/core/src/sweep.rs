//! Monte-Carlo sweep harness: empirical validation of the theorem at desk
//! scale. Every trial must succeed — the theorem guarantees existence, so a
//! failure is a solver defect, and the harness surfaces it.
//!
//! The machine-readable report contains only deterministic fields (identical
//! (seed, config, cells) give byte-identical JSON); wall-clock timings appear
//! in the text rendering only.

use serde::Serialize;

use crate::instances::{gen_degenerate, gen_random, DegenerateKind, Distribution};
use crate::solver::{solve_detailed, SolverConfig};

/// One (d, k) cell to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepCell {
    pub d: usize,
    pub k: usize,
}

impl std::str::FromStr for SweepCell {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (d, k) = s
            .split_once(':')
            .ok_or_else(|| format!("bad cell {s:?}, expected d:k"))?;
        let d = d.parse().map_err(|_| format!("bad dimension in {s:?}"))?;
        let k = k.parse().map_err(|_| format!("bad flat dimension in {s:?}"))?;
        if k >= d {
            return Err(format!("cell {s:?} needs k <= d-1"));
        }
        Ok(SweepCell { d, k })
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub cells: Vec<SweepCell>,
    /// Random unit-cube trials per cell.
    pub trials: usize,
    /// Additional degenerate trials per kind per cell.
    pub degenerate_trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
}

/// Per-cell aggregate. Residual statistics are over successful trials.
#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub residual_min: Option<f64>,
    pub residual_median: Option<f64>,
    pub residual_max: Option<f64>,
    pub restarts_min: Option<usize>,
    pub restarts_mean: Option<f64>,
    pub restarts_max: Option<usize>,
    /// Trial labels that failed, for reproduction.
    pub failed_trials: Vec<String>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub trials_per_cell: usize,
    pub degenerate_trials_per_kind: usize,
    pub cells: Vec<CellReport>,
    #[serde(skip)]
    pub total_wall_seconds: f64,
}

impl SweepReport {
    pub fn total_failures(&self) -> usize {
        self.cells.iter().map(|c| c.failures).sum()
    }

    /// Deterministic machine-readable rendering (timings excluded).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Human-readable rendering, one line per cell, including timings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "sweep seed={} trials/cell={} degenerate/kind={}\n",
            self.seed, self.trials_per_cell, self.degenerate_trials_per_kind
        ));
        for c in &self.cells {
            let fmt_opt = |v: Option<f64>| match v {
                Some(x) => format!("{x:.3e}"),
                None => "-".into(),
            };
            out.push_str(&format!(
                "cell {}:{}  trials={} ok={} fail={}  residual[min/med/max]={}/{}/{}  restarts[min/mean/max]={}/{}/{}  wall={:.2}s\n",
                c.d,
                c.k,
                c.trials,
                c.successes,
                c.failures,
                fmt_opt(c.residual_min),
                fmt_opt(c.residual_median),
                fmt_opt(c.residual_max),
                c.restarts_min.map_or("-".into(), |v| v.to_string()),
                c.restarts_mean.map_or("-".into(), |v| format!("{v:.2}")),
                c.restarts_max.map_or("-".into(), |v| v.to_string()),
                c.wall_seconds,
            ));
            for label in &c.failed_trials {
                out.push_str(&format!("  FAILED: {label}\n"));
            }
        }
        out.push_str(&format!(
            "total: {} failures, {:.2}s\n",
            self.total_failures(),
            self.total_wall_seconds
        ));
        out
    }
}

fn trial_seed(seed: u64, cell_idx: usize, label: u64, trial: usize) -> u64 {
    let mut z = seed
        ^ (cell_idx as u64).wrapping_mul(0xA076_1D64_78BD_642F)
        ^ label.wrapping_mul(0xE703_7ED1_A0B4_28DB)
        ^ (trial as u64).wrapping_mul(0x8EBC_6AF0_9C88_C6E3);
    z = (z ^ (z >> 32)).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    z ^ (z >> 32)
}

/// Runs the sweep. Trials are independent; the per-trial seeds derive from
/// (sweep seed, cell, family, trial index) so reports reproduce exactly.
pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let start_all = std::time::Instant::now();
    let mut cells = Vec::with_capacity(cfg.cells.len());
    for (cell_idx, cell) in cfg.cells.iter().enumerate() {
        let start = std::time::Instant::now();
        let mut residuals: Vec<f64> = Vec::new();
        let mut restarts: Vec<usize> = Vec::new();
        let mut failed: Vec<String> = Vec::new();
        let mut trials = 0usize;

        let mut run_one = |instance: Result<crate::solver::Instance, _>, label: String| {
            trials += 1;
            let instance = match instance {
                Ok(i) => i,
                Err(e) => {
                    failed.push(format!("{label}: generator error: {e}"));
                    return;
                }
            };
            let mut solver = cfg.solver.clone();
            solver.seed = trial_seed(cfg.seed, cell_idx, 0x50, trials);
            match solve_detailed(&instance, &solver) {
                Ok(solved) => {
                    residuals.push(solved.certificate.residual);
                    restarts.push(solved.restarts_used);
                }
                Err(e) => failed.push(format!("{label}: {e}")),
            }
        };

        for t in 0..cfg.trials {
            let seed = trial_seed(cfg.seed, cell_idx, 0x11, t);
            run_one(
                gen_random(cell.d, cell.k, Distribution::UnitCube, seed),
                format!("random[{t}] seed={seed}"),
            );
        }
        for kind in DegenerateKind::ALL {
            for t in 0..cfg.degenerate_trials {
                let seed = trial_seed(cfg.seed, cell_idx, kind.name().len() as u64, t);
                run_one(
                    gen_degenerate(cell.d, cell.k, kind, seed),
                    format!("{}[{t}] seed={seed}", kind.name()),
                );
            }
        }

        residuals.sort_by(f64::total_cmp);
        let median = if residuals.is_empty() {
            None
        } else if residuals.len() % 2 == 1 {
            Some(residuals[residuals.len() / 2])
        } else {
            let hi = residuals.len() / 2;
            Some(0.5 * (residuals[hi - 1] + residuals[hi]))
        };
        cells.push(CellReport {
            d: cell.d,
            k: cell.k,
            trials,
            successes: residuals.len(),
            failures: failed.len(),
            residual_min: residuals.first().copied(),
            residual_median: median,
            residual_max: residuals.last().copied(),
            restarts_min: restarts.iter().min().copied(),
            restarts_mean: if restarts.is_empty() {
                None
            } else {
                Some(restarts.iter().sum::<usize>() as f64 / restarts.len() as f64)
            },
            restarts_max: restarts.iter().max().copied(),
            failed_trials: failed,
            wall_seconds: start.elapsed().as_secs_f64(),
        });
    }
    SweepReport {
        seed: cfg.seed,
        trials_per_cell: cfg.trials,
        degenerate_trials_per_kind: cfg.degenerate_trials,
        cells,
        total_wall_seconds: start_all.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_parsing() {
        let c: SweepCell = "3:1".parse().unwrap();
        assert_eq!(c, SweepCell { d: 3, k: 1 });
        assert!("3".parse::<SweepCell>().is_err());
        assert!("2:2".parse::<SweepCell>().is_err());
        assert!("a:b".parse::<SweepCell>().is_err());
    }

    #[test]
    fn empty_sweep_is_clean() {
        let cfg = SweepConfig {
            cells: vec![SweepCell { d: 2, k: 1 }],
            trials: 0,
            degenerate_trials: 0,
            seed: 42,
            solver: SolverConfig::default(),
        };
        let report = run_sweep(&cfg);
        assert_eq!(report.total_failures(), 0);
        assert_eq!(report.cells[0].trials, 0);
        assert!(report.cells[0].residual_min.is_none());
    }

    #[test]
    fn small_sweep_succeeds_and_reproduces() {
        let cfg = SweepConfig {
            cells: vec![SweepCell { d: 2, k: 1 }],
            trials: 3,
            degenerate_trials: 1,
            seed: 42,
            solver: SolverConfig::default(),
        };
        let a = run_sweep(&cfg);
        let b = run_sweep(&cfg);
        assert_eq!(a.total_failures(), 0, "text:\n{}", a.to_text());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.cells[0].trials, 3 + 3);
    }
}
