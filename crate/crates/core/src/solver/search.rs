//! Search strategies for the transversal flat.
//!
//! The primary variable is the direction complement L: for fixed L every
//! projected set has d−k+2 points in the (d−k)-dimensional range of the
//! projection, hence a Radon partition, and a solution is an L where all k+1
//! projected Radon points coincide. This collapses the combinatorial layer:
//! the bipartitions are read off the projected dependence signs instead of
//! being searched.
//!
//! Strategies:
//! - `radon-trace` (default): multistart Nelder–Mead over Grassmannian charts
//!   on Σ_i ‖r_i − r̄‖², re-centering the chart at each accepted step, fresh
//!   random start on stall, and the enumerate strategy as a last-resort
//!   fallback (degenerate sets can make the Radon objective undefined at
//!   every L).
//! - `enumerate`: for every combination of covering bipartitions, minimize
//!   the feasibility gap of the projected hull system over L. Slow but free
//!   of Radon degeneracies; doubles as the cross-validation oracle.
//! - `sphere-sweep` (only d−k = 1): dense sweep over unit directions followed
//!   by local refinement.
//!
//! k = 0 short-circuits to the exact Radon partition with an exact
//! certificate.
//!
//! Restart tasks run on the ambient rayon pool; each task derives its own
//! random stream from (seed, task index) and the first success by task index
//! wins, so parallel and serial runs return the same certificate.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{GeomError, SolveError};
use crate::exact::RatMat;
use crate::feasibility::{common_point_gap_with, HullSystem};
use crate::geom::{chart_retract, Subspace};
use crate::neldermead::{minimize, NmOptions};
use crate::radon::{radon_partition_exact, radon_partition_float};
use crate::scalar::{rat_from_f64, Rat};
use crate::solver::certificate::{verify, Certificate, VerifyMode};
use crate::solver::instance::{all_covering_splits, Bipartition, Instance, SetSplit};

/// Search strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    RadonTrace,
    Enumerate,
    SphereSweep,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "radon-trace" => Ok(Strategy::RadonTrace),
            "enumerate" => Ok(Strategy::Enumerate),
            "sphere-sweep" => Ok(Strategy::SphereSweep),
            other => Err(format!(
                "unknown strategy {other:?} (expected radon-trace, enumerate or sphere-sweep)"
            )),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::RadonTrace => "radon-trace",
            Strategy::Enumerate => "enumerate",
            Strategy::SphereSweep => "sphere-sweep",
        })
    }
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub strategy: Strategy,
    /// Multistart count (restart tasks).
    pub restarts: usize,
    /// Nelder–Mead iterations per local-descent round.
    pub max_iters: usize,
    /// Residual threshold for success.
    pub tol_success: f64,
    pub seed: u64,
    /// Wall-clock budget in seconds; None means unlimited.
    pub time_budget: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            strategy: Strategy::RadonTrace,
            restarts: 48,
            max_iters: 500,
            tol_success: 1e-6,
            seed: 0,
            time_budget: None,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), SolveError> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(SolveError::InvalidInstance(
                "restarts and max_iters must be positive".into(),
            ));
        }
        if !(self.tol_success > 0.0) {
            return Err(SolveError::InvalidInstance(
                "tol_success must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Diagnostic payload for a failed search. By the theorem a solution always
/// exists, so failure means search insufficiency, never nonexistence.
#[derive(Debug, Clone)]
pub struct FailureReport {
    pub best_residual: f64,
    pub best_certificate: Option<Certificate>,
    pub restarts: usize,
    pub message: String,
}

impl std::fmt::Display for FailureReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "best residual {:.3e} after {} restarts ({})",
            self.best_residual, self.restarts, self.message
        )
    }
}

/// One evaluation of the radon-trace objective.
#[derive(Debug, Clone)]
pub struct RadonTraceEval {
    /// Σ_i ‖r_i − r̄‖²; zero exactly at a solution.
    pub value: f64,
    /// Projected Radon point of each set, in the basis of L.
    pub radon_points: Vec<DVector<f64>>,
    /// Partitions read off the dependence signs.
    pub bipartition: Bipartition,
}

/// Evaluates the radon-trace objective at L. Sets whose projection collapses
/// to a single point get that point as their Radon point (any split works for
/// them); other ill-conditioned projections propagate as errors so the caller
/// can perturb L.
pub fn objective_radon_trace(
    instance: &Instance,
    l: &Subspace,
    tols: &Tolerances,
) -> Result<RadonTraceEval, GeomError> {
    let m = instance.d() - instance.k();
    if l.dim() != m || l.ambient_dim() != instance.d() {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: l.dim(),
        });
    }
    let sets = instance.k() + 1;
    let mut radon_points = Vec::with_capacity(sets);
    let mut splits = Vec::with_capacity(sets);
    for i in 0..sets {
        let projected = l.basis().transpose() * instance.set_float(i);
        match radon_partition_float(&projected, tols) {
            Ok(r) => {
                radon_points.push(DVector::from_column_slice(&r.point));
                splits.push(SetSplit::new(r.part_pos, r.part_neg));
            }
            Err(err) => {
                if let Some(point) = collapsed_projection(&projected) {
                    radon_points.push(point);
                    splits.push(SetSplit::new(vec![0], vec![1]));
                } else {
                    return Err(err);
                }
            }
        }
    }
    let mut mean = DVector::zeros(m);
    for r in &radon_points {
        mean += r;
    }
    mean /= sets as f64;
    let value = radon_points
        .iter()
        .map(|r| (r - &mean).norm_squared())
        .sum();
    Ok(RadonTraceEval {
        value,
        radon_points,
        bipartition: Bipartition { splits },
    })
}

/// Probes a handful of subspaces; true when the Radon objective errored at
/// every one of them, which at random probes means some set is degenerate at
/// every L (for example all its points collinear while d−k ≥ 2).
fn radon_objective_unusable(instance: &Instance, seed: u64, tols: &Tolerances) -> bool {
    let d = instance.d();
    let m = d - instance.k();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x9806e));
    for probe in 0..4 {
        let l = if probe == 0 {
            let cols: Vec<DVector<f64>> = (0..m)
                .map(|j| {
                    let mut v = DVector::zeros(d);
                    v[j] = 1.0;
                    v
                })
                .collect();
            Subspace::orthonormalize(&cols, tols).expect("axis basis")
        } else {
            Subspace::random(d, m, &mut rng, tols)
        };
        if objective_radon_trace(instance, &l, tols).is_ok() {
            return false;
        }
    }
    true
}

/// The mean of the projected points when they all coincide numerically.
fn collapsed_projection(projected: &DMatrix<f64>) -> Option<DVector<f64>> {
    let first = projected.column(0);
    let scale = 1.0 + projected.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let spread = projected
        .column_iter()
        .map(|c| (c - first).norm())
        .fold(0.0f64, f64::max);
    if spread <= 1e-9 * scale {
        Some(projected.column_mean())
    } else {
        None
    }
}

/// A solved instance with search statistics.
#[derive(Debug, Clone)]
pub struct Solved {
    pub certificate: Certificate,
    /// Serial-equivalent number of restart tasks consumed (0 for exact paths).
    pub restarts_used: usize,
}

/// Main entry: finds and internally verifies a certificate.
pub fn solve(instance: &Instance, cfg: &SolverConfig) -> Result<Certificate, SolveError> {
    solve_detailed(instance, cfg).map(|s| s.certificate)
}

/// Like [`solve`], also reporting how many restart tasks were consumed.
pub fn solve_detailed(instance: &Instance, cfg: &SolverConfig) -> Result<Solved, SolveError> {
    cfg.validate()?;
    let tols = Tolerances::default().with_certificate_residual(cfg.tol_success);
    if instance.k() == 0 {
        return solve_k0(instance, &tols).map(|certificate| Solved {
            certificate,
            restarts_used: 0,
        });
    }
    let deadline = cfg
        .time_budget
        .map(|s| Instant::now() + Duration::from_secs_f64(s));
    let outcome = match cfg.strategy {
        Strategy::RadonTrace => {
            // Degenerate sets (for example a fully collinear set) make the
            // Radon objective undefined at every L; the gap objective is not,
            // so such instances go straight to the enumerate fallback.
            if radon_objective_unusable(instance, cfg.seed, &tols) {
                enumerate_search(instance, cfg, &tols, deadline)
            } else {
                match radon_trace_search(instance, cfg, &tols, deadline) {
                    Ok(pair) => Ok(pair),
                    Err(primary) => match enumerate_search(instance, cfg, &tols, deadline) {
                        Ok(pair) => Ok(pair),
                        Err(_) => Err(primary),
                    },
                }
            }
        }
        Strategy::Enumerate => enumerate_search(instance, cfg, &tols, deadline),
        Strategy::SphereSweep => {
            if instance.d() - instance.k() != 1 {
                return Err(SolveError::InvalidInstance(
                    "sphere-sweep requires d-k = 1 (k = d-1)".into(),
                ));
            }
            sphere_sweep_search(instance, cfg, &tols, deadline)
        }
    };
    match outcome {
        Ok((idx, certificate)) => Ok(Solved {
            certificate,
            restarts_used: idx + 1,
        }),
        Err(report) => Err(SolveError::Failed(report)),
    }
}

/// k = 0: the flat is a point and the exact Radon partition is the certificate.
fn solve_k0(instance: &Instance, tols: &Tolerances) -> Result<Certificate, SolveError> {
    let r = radon_partition_exact(&instance.sets()[0])
        .map_err(|e| SolveError::InvalidInstance(e.to_string()))?;
    let cert = Certificate {
        bipartitions: Bipartition {
            splits: vec![SetSplit {
                first: r.part_pos.clone(),
                second: r.part_neg.clone(),
            }],
        },
        l_basis: RatMat::identity(instance.d()),
        common_point: r.point.clone(),
        weights: vec![(r.weights_pos.clone(), r.weights_neg.clone())],
        residual: 0.0,
    };
    let report = verify(instance, &cert, tols.certificate_residual, VerifyMode::Auto, tols)
        .map_err(|e| SolveError::InvalidInstance(format!("internal: {e}")))?;
    debug_assert!(report.exact);
    if !report.accepted {
        return Err(SolveError::Failed(FailureReport {
            best_residual: report.residual,
            best_certificate: Some(cert),
            restarts: 0,
            message: "exact Radon certificate failed verification".into(),
        }));
    }
    Ok(cert)
}

/// Builds the projected hull system for a bipartition at a given L and polishes
/// the common point; returns the certificate and its residual (max distance of
/// any hull point to the mean).
fn extract_certificate(
    instance: &Instance,
    l: &Subspace,
    bipartition: &Bipartition,
) -> Result<(Certificate, f64), GeomError> {
    let m = l.dim();
    let mut hulls = Vec::with_capacity(2 * (instance.k() + 1));
    for (i, split) in bipartition.splits.iter().enumerate() {
        let projected = l.basis().transpose() * instance.set_float(i);
        for part in [&split.first, &split.second] {
            let cols: Vec<DVector<f64>> =
                part.iter().map(|&a| projected.column(a).into()).collect();
            hulls.push(DMatrix::from_columns(&cols));
        }
    }
    let system = HullSystem::new(m, hulls)?;
    let result = common_point_gap_with(&system, 10_000, 1e-16);
    let residual = result
        .hull_points
        .iter()
        .map(|q| (q - &result.witness_point).norm())
        .fold(0.0f64, f64::max);

    let to_rat = |x: f64| rat_from_f64(x);
    let mut l_cols: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for col in l.basis().column_iter() {
        l_cols.push(col.iter().map(|&x| to_rat(x)).collect::<Result<_, _>>()?);
    }
    let common_point: Vec<Rat> = result
        .witness_point
        .iter()
        .map(|&x| to_rat(x))
        .collect::<Result<_, _>>()?;
    let mut weights = Vec::with_capacity(instance.k() + 1);
    for i in 0..=instance.k() {
        let w1 = result.weights[2 * i]
            .iter()
            .map(|&x| to_rat(x))
            .collect::<Result<_, _>>()?;
        let w2 = result.weights[2 * i + 1]
            .iter()
            .map(|&x| to_rat(x))
            .collect::<Result<_, _>>()?;
        weights.push((w1, w2));
    }
    let cert = Certificate {
        bipartitions: bipartition.clone(),
        l_basis: RatMat::from_cols(&l_cols),
        common_point,
        weights,
        residual,
    };
    Ok((cert, residual))
}

fn derive_seed(seed: u64, idx: u64) -> u64 {
    let mut z = seed ^ idx.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() > d)
}

/// Chart-descent loop shared by the strategies: Nelder–Mead in the current
/// chart, re-center at each accepted improvement, stop on stall or target.
struct Descent {
    center: Subspace,
    value: f64,
}

fn descend_charts<F>(
    start: Subspace,
    mut eval: F,
    max_iters: usize,
    target: f64,
    deadline: Option<Instant>,
) -> Descent
where
    F: FnMut(&Subspace) -> f64,
{
    let d = start.ambient_dim();
    let m = start.dim();
    let params = (d - m) * m;
    let tols = Tolerances::default();
    let mut center = start;
    let mut best = eval(&center);
    let mut step = 0.5f64;
    let mut stalls = 0;
    for _round in 0..60 {
        if best <= target || past(deadline) || params == 0 {
            break;
        }
        let opts = NmOptions {
            max_iters,
            ftol: (target / 100.0).max(1e-300),
            xtol: 1e-13,
        };
        let result = minimize(
            |x: &[f64]| {
                let t = DMatrix::from_row_slice(d - m, m, x);
                match chart_retract(&center, &t, &tols) {
                    Ok(l) => eval(&l),
                    Err(_) => f64::INFINITY,
                }
            },
            &vec![0.0; params],
            step,
            &opts,
        );
        if !result.fx.is_finite() && !best.is_finite() {
            // Objective undefined over the whole chart; more rounds will not help.
            break;
        }
        if result.fx < best {
            let t = DMatrix::from_row_slice(d - m, m, &result.x);
            if let Ok(l) = chart_retract(&center, &t, &tols) {
                center = l;
            }
            let improved_well = result.fx < 0.25 * best;
            best = result.fx;
            stalls = if improved_well { 0 } else { stalls + 1 };
        } else {
            stalls += 1;
        }
        if stalls >= 3 {
            break;
        }
        // Shrink the trust region as the value drops.
        step = (30.0 * best.max(0.0).sqrt()).clamp(1e-7, 0.5);
    }
    Descent {
        center,
        value: best,
    }
}

type TaskRecord = (usize, f64, Option<Certificate>);

/// Runs `count` tasks on the rayon pool and returns the first success by task
/// index; per-task cancellation is monotone (a task bails only when a
/// smaller-indexed task already succeeded) so the winner matches a serial run.
fn first_success<F>(count: usize, task: F) -> (Option<(usize, Certificate)>, Vec<TaskRecord>)
where
    F: Fn(usize, &AtomicUsize) -> (Option<Certificate>, f64, Option<Certificate>) + Sync,
{
    let winner = AtomicUsize::new(usize::MAX);
    let records: Mutex<Vec<TaskRecord>> = Mutex::new(Vec::new());
    let found = (0..count)
        .into_par_iter()
        .filter_map(|idx| {
            if winner.load(Ordering::Relaxed) < idx {
                return None;
            }
            let (success, best_residual, best_cert) = task(idx, &winner);
            records
                .lock()
                .expect("records mutex")
                .push((idx, best_residual, best_cert));
            if success.is_some() {
                winner.fetch_min(idx, Ordering::Relaxed);
            }
            success.map(|cert| (idx, cert))
        })
        .find_first(|_| true);
    (found, records.into_inner().expect("records mutex"))
}

fn failure_from_records(records: Vec<TaskRecord>, restarts: usize, message: &str) -> FailureReport {
    let best = records
        .into_iter()
        .filter(|(_, r, _)| r.is_finite())
        .min_by(|(ia, ra, _), (ib, rb, _)| ra.total_cmp(rb).then(ia.cmp(ib)));
    match best {
        Some((_, residual, cert)) => FailureReport {
            best_residual: residual,
            best_certificate: cert,
            restarts,
            message: message.into(),
        },
        None => FailureReport {
            best_residual: f64::INFINITY,
            best_certificate: None,
            restarts,
            message: message.into(),
        },
    }
}

fn radon_trace_search(
    instance: &Instance,
    cfg: &SolverConfig,
    tols: &Tolerances,
    deadline: Option<Instant>,
) -> Result<(usize, Certificate), FailureReport> {
    let d = instance.d();
    let m = d - instance.k();
    let target = (0.05 * cfg.tol_success).powi(2);

    let task = |idx: usize, winner: &AtomicUsize| -> (Option<Certificate>, f64, Option<Certificate>) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, idx as u64));
        // Task 0 starts at the axis-aligned chart center, the rest random.
        let start = if idx == 0 {
            let cols: Vec<DVector<f64>> = (0..m)
                .map(|j| {
                    let mut v = DVector::zeros(d);
                    v[j] = 1.0;
                    v
                })
                .collect();
            Subspace::orthonormalize(&cols, tols).expect("axis basis")
        } else {
            Subspace::random(d, m, &mut rng, tols)
        };
        if winner.load(Ordering::Relaxed) < idx {
            return (None, f64::INFINITY, None);
        }
        let descent = descend_charts(
            start,
            |l| match objective_radon_trace(instance, l, tols) {
                Ok(eval) => eval.value,
                Err(_) => f64::INFINITY,
            },
            cfg.max_iters,
            target,
            deadline,
        );
        if !descent.value.is_finite() {
            return (None, f64::INFINITY, None);
        }
        let eval = match objective_radon_trace(instance, &descent.center, tols) {
            Ok(e) => e,
            Err(_) => return (None, f64::INFINITY, None),
        };
        let (cert, residual) = match extract_certificate(instance, &descent.center, &eval.bipartition)
        {
            Ok(pair) => pair,
            Err(_) => return (None, f64::INFINITY, None),
        };
        let ok = residual <= cfg.tol_success
            && verify(instance, &cert, cfg.tol_success, VerifyMode::FloatOnly, tols)
                .map_or(false, |r| r.accepted);
        if ok {
            (Some(cert), residual, None)
        } else {
            (None, residual, Some(cert))
        }
    };

    let (found, records) = first_success(cfg.restarts, task);
    match found {
        Some(pair) => Ok(pair),
        None => Err(failure_from_records(
            records,
            cfg.restarts,
            "radon-trace multistart exhausted",
        )),
    }
}

pub(crate) fn enumerate_combos(instance: &Instance) -> Result<Vec<Bipartition>, String> {
    let n = instance.points_per_set();
    let per_set = all_covering_splits(n);
    let sets = instance.k() + 1;
    let total = per_set.len().checked_pow(sets as u32);
    match total {
        Some(t) if t <= 1_000_000 => {}
        _ => return Err(format!("{} split combinations exceed desk scale", per_set.len())),
    }
    let mut combos = Vec::new();
    let mut stack = vec![0usize; sets];
    loop {
        combos.push(Bipartition {
            splits: stack.iter().map(|&j| per_set[j].clone()).collect(),
        });
        // Odometer increment.
        let mut pos = sets;
        loop {
            if pos == 0 {
                return Ok(combos);
            }
            pos -= 1;
            stack[pos] += 1;
            if stack[pos] < per_set.len() {
                break;
            }
            stack[pos] = 0;
        }
    }
}

/// Feasibility gap of the projected hull system for a fixed bipartition.
pub(crate) fn gap_for_combo(
    instance: &Instance,
    l: &Subspace,
    combo: &Bipartition,
    max_iters: usize,
    min_decrease: f64,
) -> f64 {
    let m = l.dim();
    let mut hulls = Vec::with_capacity(2 * (instance.k() + 1));
    for (i, split) in combo.splits.iter().enumerate() {
        let projected = l.basis().transpose() * instance.set_float(i);
        for part in [&split.first, &split.second] {
            let cols: Vec<DVector<f64>> =
                part.iter().map(|&a| projected.column(a).into()).collect();
            hulls.push(DMatrix::from_columns(&cols));
        }
    }
    match HullSystem::new(m, hulls) {
        Ok(system) => common_point_gap_with(&system, max_iters, min_decrease).gap,
        Err(_) => f64::INFINITY,
    }
}

fn enumerate_search(
    instance: &Instance,
    cfg: &SolverConfig,
    tols: &Tolerances,
    deadline: Option<Instant>,
) -> Result<(usize, Certificate), FailureReport> {
    let combos = match enumerate_combos(instance) {
        Ok(c) => c,
        Err(msg) => {
            return Err(FailureReport {
                best_residual: f64::INFINITY,
                best_certificate: None,
                restarts: 0,
                message: msg,
            })
        }
    };
    let d = instance.d();
    let m = d - instance.k();
    let restarts_per_combo = 6usize;
    let gap_target = (0.25 * cfg.tol_success).powi(2);
    let count = combos.len() * restarts_per_combo;

    let task = |idx: usize, winner: &AtomicUsize| -> (Option<Certificate>, f64, Option<Certificate>) {
        // Interleaved order: every combo gets its first restart before any
        // combo gets its second, so the winning combo is reached early.
        let combo = &combos[idx % combos.len()];
        let sub_idx = idx / combos.len();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed ^ 0xE17E, idx as u64));
        let start = if sub_idx == 0 {
            let cols: Vec<DVector<f64>> = (0..m)
                .map(|j| {
                    let mut v = DVector::zeros(d);
                    v[j] = 1.0;
                    v
                })
                .collect();
            Subspace::orthonormalize(&cols, tols).expect("axis basis")
        } else {
            Subspace::random(d, m, &mut rng, tols)
        };
        if winner.load(Ordering::Relaxed) < idx {
            return (None, f64::INFINITY, None);
        }
        // Coarse gap during the descent, full precision at extraction.
        let descent = descend_charts(
            start,
            |l| gap_for_combo(instance, l, combo, 200, 1e-14),
            cfg.max_iters.min(300),
            gap_target,
            deadline,
        );
        let (cert, residual) = match extract_certificate(instance, &descent.center, combo) {
            Ok(pair) => pair,
            Err(_) => return (None, f64::INFINITY, None),
        };
        let ok = residual <= cfg.tol_success
            && verify(instance, &cert, cfg.tol_success, VerifyMode::FloatOnly, tols)
                .map_or(false, |r| r.accepted);
        if ok {
            (Some(cert), residual, None)
        } else {
            (None, residual, Some(cert))
        }
    };

    let (found, records) = first_success(count, task);
    match found {
        Some(pair) => Ok(pair),
        None => Err(failure_from_records(
            records,
            count,
            "bipartition enumeration exhausted",
        )),
    }
}

/// Median of three values: the Radon point of three points on a line.
fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

fn sweep_value(instance: &Instance, u: &DVector<f64>) -> f64 {
    let sets = instance.k() + 1;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..sets {
        let y = instance.set_float(i).transpose() * u;
        let r = median3(y[0], y[1], y[2]);
        sum += r;
        sumsq += r * r;
    }
    sumsq - sum * sum / sets as f64
}

fn sphere_sweep_search(
    instance: &Instance,
    cfg: &SolverConfig,
    tols: &Tolerances,
    deadline: Option<Instant>,
) -> Result<(usize, Certificate), FailureReport> {
    let d = instance.d();

    // Dense direction grid (projective: u and −u give the same L).
    let mut candidates: Vec<(f64, DVector<f64>)> = Vec::new();
    let consider = |u: DVector<f64>, best: &mut Vec<(f64, DVector<f64>)>| {
        let v = sweep_value(instance, &u);
        if best.len() < 16 {
            best.push((v, u));
            best.sort_by(|a, b| a.0.total_cmp(&b.0));
        } else if v < best[15].0 {
            best[15] = (v, u);
            best.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
    };
    match d {
        2 => {
            let steps = 4096usize;
            for t in 0..steps {
                let theta = t as f64 * std::f64::consts::TAU / steps as f64;
                consider(
                    DVector::from_column_slice(&[theta.cos(), theta.sin()]),
                    &mut candidates,
                );
            }
        }
        3 => {
            let steps = 4096usize;
            for tphi in 0..=steps / 4 {
                let phi = tphi as f64 * std::f64::consts::TAU / steps as f64;
                for ttheta in 0..steps {
                    let theta = ttheta as f64 * std::f64::consts::TAU / steps as f64;
                    consider(
                        DVector::from_column_slice(&[
                            phi.cos() * theta.cos(),
                            phi.cos() * theta.sin(),
                            phi.sin(),
                        ]),
                        &mut candidates,
                    );
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0x5eeb));
            for _ in 0..100_000 {
                let l = Subspace::random(d, 1, &mut rng, tols);
                consider(l.basis().column(0).into_owned(), &mut candidates);
            }
        }
    }

    // Local refinement from the best grid directions.
    let task = |idx: usize, _winner: &AtomicUsize| -> (Option<Certificate>, f64, Option<Certificate>) {
        let Some((_, u)) = candidates.get(idx) else {
            return (None, f64::INFINITY, None);
        };
        let Ok(start) = Subspace::orthonormalize(&[u.clone()], tols) else {
            return (None, f64::INFINITY, None);
        };
        let target = (0.05 * cfg.tol_success).powi(2);
        let descent = descend_charts(
            start,
            |l| match objective_radon_trace(instance, l, tols) {
                Ok(eval) => eval.value,
                Err(_) => f64::INFINITY,
            },
            cfg.max_iters,
            target,
            deadline,
        );
        let eval = match objective_radon_trace(instance, &descent.center, tols) {
            Ok(e) => e,
            Err(_) => return (None, f64::INFINITY, None),
        };
        let (cert, residual) = match extract_certificate(instance, &descent.center, &eval.bipartition)
        {
            Ok(pair) => pair,
            Err(_) => return (None, f64::INFINITY, None),
        };
        let ok = residual <= cfg.tol_success
            && verify(instance, &cert, cfg.tol_success, VerifyMode::FloatOnly, tols)
                .map_or(false, |r| r.accepted);
        if ok {
            (Some(cert), residual, None)
        } else {
            (None, residual, Some(cert))
        }
    };

    let (found, records) = first_success(candidates.len(), task);
    match found {
        Some(pair) => Ok(pair),
        None => Err(failure_from_records(
            records,
            candidates.len(),
            "sphere sweep refinement failed",
        )),
    }
}
