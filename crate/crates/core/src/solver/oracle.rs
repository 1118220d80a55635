//! Brute-force oracle: exhaustive bipartitions × a dense angle grid over the
//! Grassmannian. Independent of the chart search and of the Radon objective;
//! used to validate the solver on small instances before trusting it on
//! larger ones. Desk scale only (d ≤ 3, d−k ≤ 2).

use nalgebra::DVector;
use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::SolveError;
use crate::geom::Subspace;
use crate::solver::instance::{Bipartition, Instance};
use crate::solver::search::{enumerate_combos, gap_for_combo};

/// Best configuration found by the grid sweep.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub bipartition: Bipartition,
    pub l: Subspace,
    pub gap: f64,
}

/// Exhausts every bipartition combination against a dense grid of direction
/// complements, returning the global best feasibility gap.
pub fn brute_oracle(instance: &Instance, grid_resolution: usize) -> Result<OracleResult, SolveError> {
    let d = instance.d();
    let m = d - instance.k();
    if d > 3 || m > 2 {
        return Err(SolveError::BudgetExceeded(format!(
            "oracle supports d <= 3 and d-k <= 2, got d={d}, k={}",
            instance.k()
        )));
    }
    if grid_resolution == 0 {
        return Err(SolveError::InvalidInstance(
            "grid resolution must be positive".into(),
        ));
    }
    let tols = Tolerances::default();
    let combos = enumerate_combos(instance)
        .map_err(SolveError::InvalidInstance)?;

    let grid: Vec<Subspace> = direction_grid(d, m, grid_resolution, &tols);

    // Best (gap, grid index, combo index), ties to the earliest.
    let best = grid
        .par_iter()
        .enumerate()
        .map(|(gi, l)| {
            let mut local: Option<(f64, usize, usize)> = None;
            for (ci, combo) in combos.iter().enumerate() {
                let gap = gap_for_combo(instance, l, combo, 2_000, 1e-15);
                if local.map_or(true, |(g, _, _)| gap < g) {
                    local = Some((gap, gi, ci));
                }
            }
            local.expect("at least one combo")
        })
        .reduce_with(|a, b| {
            if (b.0, b.1, b.2) < (a.0, a.1, a.2) {
                b
            } else {
                a
            }
        })
        .expect("nonempty grid");

    let (gap, gi, ci) = best;
    Ok(OracleResult {
        bipartition: combos[ci].clone(),
        l: grid[gi].clone(),
        gap,
    })
}

/// Angle grid over Gr(d, m) for the supported desk-scale cases.
fn direction_grid(d: usize, m: usize, res: usize, tols: &Tolerances) -> Vec<Subspace> {
    if m == d {
        return vec![Subspace::full(d)];
    }
    let lines: Vec<DVector<f64>> = match d {
        2 => (0..res)
            .map(|t| {
                let theta = t as f64 * std::f64::consts::PI / res as f64;
                DVector::from_column_slice(&[theta.cos(), theta.sin()])
            })
            .collect(),
        3 => {
            // Hemisphere: azimuth over a full turn, elevation over a quarter.
            let elev_steps = (res / 4).max(1);
            let mut v = Vec::with_capacity(res * (elev_steps + 1));
            for e in 0..=elev_steps {
                let phi = e as f64 * std::f64::consts::FRAC_PI_2 / elev_steps as f64;
                for t in 0..res {
                    let theta = t as f64 * std::f64::consts::TAU / res as f64;
                    v.push(DVector::from_column_slice(&[
                        phi.cos() * theta.cos(),
                        phi.cos() * theta.sin(),
                        phi.sin(),
                    ]));
                }
            }
            v
        }
        _ => unreachable!("guarded by the desk-scale check"),
    };
    lines
        .into_iter()
        .filter_map(|u| {
            let line = Subspace::orthonormalize(&[u], tols).ok()?;
            if m == 1 {
                Some(line)
            } else {
                // m = d − 1: the grid line is the normal of L.
                Some(line.complement(tols))
            }
        })
        .collect()
}
