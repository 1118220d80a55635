//! Does a family of convex hulls share a common point, and by how much does it
//! miss one?
//!
//! The float path minimizes the jointly convex merit Σ_j ‖q_j − p‖² over
//! points q_j in each hull and a free center p, by alternating minimization:
//! p is the mean of the q_j, and each q_j is the nearest point of its hull to
//! p, computed by Frank–Wolfe over the weight simplex with away steps. The
//! exact path phrases the common-point condition as a rational LP and decides
//! it with the phase-1 simplex in [`crate::lp`].

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::GeomError;
use crate::exact::RatMat;
use crate::lp;
use crate::scalar::{rat_zero, Rat};

const FW_MAX_ITERS: usize = 10_000;
const ALT_MAX_ITERS: usize = 10_000;
const ALT_DECREASE: f64 = 1e-14;

/// Float-mode family of hulls given by vertex lists (one m×n_j matrix each).
#[derive(Debug, Clone)]
pub struct HullSystem {
    ambient_dim: usize,
    hulls: Vec<DMatrix<f64>>,
}

impl HullSystem {
    pub fn new(ambient_dim: usize, hulls: Vec<DMatrix<f64>>) -> Result<Self, GeomError> {
        if hulls.is_empty() {
            return Err(GeomError::Invalid("need at least one hull".into()));
        }
        for h in &hulls {
            if h.nrows() != ambient_dim {
                return Err(GeomError::DimensionMismatch {
                    expected: ambient_dim,
                    got: h.nrows(),
                });
            }
            if h.ncols() == 0 {
                return Err(GeomError::Invalid("empty hull".into()));
            }
            if h.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::NonFinite);
            }
        }
        Ok(HullSystem { ambient_dim, hulls })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hulls(&self) -> &[DMatrix<f64>] {
        &self.hulls
    }
}

/// Exact-mode family of hulls.
#[derive(Debug, Clone)]
pub struct ExactHullSystem {
    ambient_dim: usize,
    hulls: Vec<Vec<Vec<Rat>>>,
}

impl ExactHullSystem {
    pub fn new(ambient_dim: usize, hulls: Vec<Vec<Vec<Rat>>>) -> Result<Self, GeomError> {
        if hulls.is_empty() {
            return Err(GeomError::Invalid("need at least one hull".into()));
        }
        for h in &hulls {
            if h.is_empty() {
                return Err(GeomError::Invalid("empty hull".into()));
            }
            for p in h {
                if p.len() != ambient_dim {
                    return Err(GeomError::DimensionMismatch {
                        expected: ambient_dim,
                        got: p.len(),
                    });
                }
            }
        }
        Ok(ExactHullSystem { ambient_dim, hulls })
    }

    pub fn hulls(&self) -> &[Vec<Vec<Rat>>] {
        &self.hulls
    }
}

/// Outcome of the float-mode merit minimization. `gap` is zero (up to the
/// solver's termination accuracy) exactly when the hulls share a point; the
/// witness is the mean of the per-hull nearest points q_j, and `weights[j]`
/// are the convex weights with q_j = Σ_a weights[j][a]·v_a.
#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub gap: f64,
    pub witness_point: DVector<f64>,
    pub weights: Vec<Vec<f64>>,
    pub hull_points: Vec<DVector<f64>>,
}

/// Nearest point of conv(columns of `points`) to `target`, with convex
/// weights. Frank–Wolfe with away steps and exact line search; terminates
/// when the Frank–Wolfe duality gap drops below 1e−10·(1 + ‖target‖²).
pub fn nearest_in_hull(points: &DMatrix<f64>, target: &DVector<f64>) -> (DVector<f64>, Vec<f64>) {
    let n = points.ncols();
    debug_assert!(n > 0, "hull must be nonempty");
    if n == 1 {
        return (points.column(0).into_owned(), vec![1.0]);
    }
    let tol = 1e-10 * (1.0 + target.norm_squared());

    // Start at the vertex nearest the target.
    let start = (0..n)
        .min_by(|&a, &b| {
            let da = (points.column(a) - target).norm_squared();
            let db = (points.column(b) - target).norm_squared();
            da.partial_cmp(&db).expect("finite coordinates")
        })
        .expect("nonempty hull");
    let mut w = vec![0.0f64; n];
    w[start] = 1.0;
    let mut x: DVector<f64> = points.column(start).into_owned();

    for _ in 0..FW_MAX_ITERS {
        // Gradient of ‖Vw − t‖² in weight space is 2Vᵀ(x − t).
        let resid = &x - target;
        let grad: Vec<f64> = (0..n)
            .map(|a| 2.0 * points.column(a).dot(&resid))
            .collect();
        let gw: f64 = grad.iter().zip(&w).map(|(g, wi)| g * wi).sum();
        let s = (0..n)
            .min_by(|&a, &b| grad[a].partial_cmp(&grad[b]).expect("finite gradient"))
            .expect("nonempty");
        let fw_gap = gw - grad[s];
        if fw_gap <= tol {
            break;
        }
        let away = (0..n)
            .filter(|&a| w[a] > 0.0)
            .max_by(|&a, &b| grad[a].partial_cmp(&grad[b]).expect("finite gradient"));
        let away_gap = away.map_or(f64::NEG_INFINITY, |v| grad[v] - gw);

        let (dir, gamma_max, toward, away_from) = if away_gap > fw_gap && away.is_some() {
            let v = away.expect("checked");
            if w[v] >= 1.0 {
                // Single active vertex: away step is empty, take the FW step.
                (points.column(s) - &x, 1.0, Some(s), None)
            } else {
                (
                    &x - points.column(v),
                    w[v] / (1.0 - w[v]),
                    None,
                    Some(v),
                )
            }
        } else {
            (points.column(s) - &x, 1.0, Some(s), None)
        };
        let den = dir.norm_squared();
        if den == 0.0 {
            break;
        }
        let gamma = (-resid.dot(&dir) / den).clamp(0.0, gamma_max);
        if gamma == 0.0 {
            break;
        }
        match (toward, away_from) {
            (Some(s), _) => {
                for wi in w.iter_mut() {
                    *wi *= 1.0 - gamma;
                }
                w[s] += gamma;
            }
            (_, Some(v)) => {
                // w ← w + γ(w − e_v); γ = γ_max zeroes out the away vertex.
                for wi in w.iter_mut() {
                    *wi *= 1.0 + gamma;
                }
                w[v] = 0.0f64.max(w[v] - gamma);
            }
            _ => unreachable!(),
        }
        // Clean tiny negatives and renormalize.
        let mut sum = 0.0;
        for wi in w.iter_mut() {
            if *wi < 0.0 {
                *wi = 0.0;
            }
            sum += *wi;
        }
        for wi in w.iter_mut() {
            *wi /= sum;
        }
        x = points * DVector::from_column_slice(&w);
    }

    (x, w)
}

/// Minimizes Σ_j ‖q_j − p‖² over q_j ∈ conv(hull_j) and free p. On return the
/// witness point is the mean of the hull points and the gap is evaluated at
/// that mean.
pub fn common_point_gap(system: &HullSystem) -> FeasibilityResult {
    common_point_gap_with(system, ALT_MAX_ITERS, ALT_DECREASE)
}

/// Same minimization with caller-chosen iteration cap and decrease threshold;
/// the search loop uses a coarse setting and polishes at full precision once.
pub fn common_point_gap_with(
    system: &HullSystem,
    max_iters: usize,
    min_decrease: f64,
) -> FeasibilityResult {
    let m = system.ambient_dim;
    let hulls = &system.hulls;
    let count = hulls.len() as f64;

    let mut q: Vec<DVector<f64>> = hulls
        .iter()
        .map(|h| h.column_mean())
        .collect();
    let mut weights: Vec<Vec<f64>> = hulls
        .iter()
        .map(|h| vec![1.0 / h.ncols() as f64; h.ncols()])
        .collect();

    let objective = |q: &[DVector<f64>], p: &DVector<f64>| -> f64 {
        q.iter().map(|qj| (qj - p).norm_squared()).sum()
    };
    let mean = |q: &[DVector<f64>]| -> DVector<f64> {
        let mut p = DVector::zeros(m);
        for qj in q {
            p += qj;
        }
        p / count
    };

    let mut p = mean(&q);
    let mut prev = objective(&q, &p);
    for _ in 0..max_iters {
        for (j, h) in hulls.iter().enumerate() {
            let (qj, wj) = nearest_in_hull(h, &p);
            q[j] = qj;
            weights[j] = wj;
        }
        p = mean(&q);
        let cur = objective(&q, &p);
        if prev - cur < min_decrease {
            prev = cur;
            break;
        }
        prev = cur;
    }

    FeasibilityResult {
        gap: prev,
        witness_point: p,
        weights,
        hull_points: q,
    }
}

/// Exact decision: do the hulls share a common point? Phase-1 LP over the
/// convex weights of every hull and a free point p (split into p⁺ − p⁻),
/// pivoted with Bland's rule. Returns the rational witness point when
/// feasible.
pub fn feasible_exact(system: &ExactHullSystem) -> (bool, Option<Vec<Rat>>) {
    let m = system.ambient_dim;
    let hulls = &system.hulls;
    let total_w: usize = hulls.iter().map(Vec::len).sum();
    let cols = total_w + 2 * m;
    let rows = hulls.len() * (m + 1);

    let one = Rat::from_integer(1.into());
    let mut a = RatMat::zeros(rows, cols);
    let mut b = vec![rat_zero(); rows];
    let mut col_base = 0;
    for (j, hull) in hulls.iter().enumerate() {
        let row_base = j * (m + 1);
        for (aidx, point) in hull.iter().enumerate() {
            for i in 0..m {
                a[(row_base + i, col_base + aidx)] = point[i].clone();
            }
            a[(row_base + m, col_base + aidx)] = one.clone();
        }
        for i in 0..m {
            // − p⁺ + p⁻ brings every hull's combination to the same point.
            a[(row_base + i, total_w + i)] = -one.clone();
            a[(row_base + i, total_w + m + i)] = one.clone();
        }
        b[row_base + m] = one.clone();
        col_base += hull.len();
    }

    match lp::feasible_point(&a, &b) {
        Some(x) => {
            let p: Vec<Rat> = (0..m)
                .map(|i| &x[total_w + i] - &x[total_w + m + i])
                .collect();
            (true, Some(p))
        }
        None => (false, None),
    }
}

/// Convenience: exact test that a single point lies in a hull.
pub fn point_in_hull_exact(hull: &[Vec<Rat>], point: &[Rat]) -> bool {
    let m = point.len();
    let system = ExactHullSystem::new(
        m,
        vec![hull.to_vec(), vec![point.to_vec()]],
    )
    .expect("valid system");
    feasible_exact(&system).0
}

/// Float merit on projected hulls, used by the enumerate strategy and oracle.
pub fn projected_gap(
    hulls: &[DMatrix<f64>],
    _tol: &Tolerances,
) -> Result<FeasibilityResult, GeomError> {
    let m = hulls
        .first()
        .map(DMatrix::nrows)
        .ok_or_else(|| GeomError::Invalid("no hulls".into()))?;
    let system = HullSystem::new(m, hulls.to_vec())?;
    Ok(common_point_gap(&system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon::radon_partition_exact;
    use crate::scalar::{rat, rat_int};
    use nalgebra::dvector;

    fn mat(cols: &[&[f64]]) -> DMatrix<f64> {
        let vecs: Vec<DVector<f64>> = cols
            .iter()
            .map(|c| DVector::from_column_slice(c))
            .collect();
        DMatrix::from_columns(&vecs)
    }

    #[test]
    fn nearest_foot_of_perpendicular_on_segment() {
        let (q, w) = nearest_in_hull(&mat(&[&[0.0, 0.0], &[2.0, 0.0]]), &dvector![1.0, 5.0]);
        assert!((q - dvector![1.0, 0.0]).norm() < 1e-9);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn nearest_single_point_hull() {
        let (q, w) = nearest_in_hull(&mat(&[&[0.0, 0.0]]), &dvector![3.0, -4.0]);
        assert_eq!(q, dvector![0.0, 0.0]);
        assert_eq!(w, vec![1.0]);
    }

    #[test]
    fn nearest_interior_target_is_fixed_point() {
        // Target inside the triangle.
        let hull = mat(&[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 4.0]]);
        let t = dvector![1.0, 1.0];
        let (q, w) = nearest_in_hull(&hull, &t);
        assert!((q - &t).norm() < 1e-7);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gap_zero_for_point_on_segment() {
        let system = HullSystem::new(
            2,
            vec![mat(&[&[0.0, 0.0], &[2.0, 0.0]]), mat(&[&[1.0, 0.0]])],
        )
        .unwrap();
        let r = common_point_gap(&system);
        assert!(r.gap < 1e-12);
        assert!((r.witness_point - dvector![1.0, 0.0]).norm() < 1e-7);
    }

    #[test]
    fn gap_of_disjoint_intervals() {
        // [0,1] and [2,3] on the line: p = 3/2, q = (1, 2), gap = 1/2.
        let system = HullSystem::new(1, vec![mat(&[&[0.0], &[1.0]]), mat(&[&[2.0], &[3.0]])])
            .unwrap();
        let r = common_point_gap(&system);
        assert!((r.gap - 0.5).abs() < 1e-9);
        assert!((r.witness_point[0] - 1.5).abs() < 1e-9);
        assert!((r.hull_points[0][0] - 1.0).abs() < 1e-9);
        assert!((r.hull_points[1][0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exact_crossing_segments() {
        let hulls = vec![
            vec![vec![rat_int(0), rat_int(0)], vec![rat_int(2), rat_int(2)]],
            vec![vec![rat_int(0), rat_int(2)], vec![rat_int(2), rat_int(0)]],
        ];
        let system = ExactHullSystem::new(2, hulls).unwrap();
        let (ok, witness) = feasible_exact(&system);
        assert!(ok);
        assert_eq!(witness.unwrap(), vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn exact_disjoint_intervals() {
        let hulls = vec![
            vec![vec![rat_int(0)], vec![rat_int(1)]],
            vec![vec![rat_int(2)], vec![rat_int(3)]],
        ];
        let system = ExactHullSystem::new(1, hulls).unwrap();
        let (ok, witness) = feasible_exact(&system);
        assert!(!ok);
        assert!(witness.is_none());
    }

    #[test]
    fn exact_agrees_with_radon_parts() {
        let points = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(4), rat_int(0)],
            vec![rat_int(0), rat_int(4)],
            vec![rat_int(1), rat_int(1)],
        ];
        let r = radon_partition_exact(&points).unwrap();
        let hull_of = |idx: &[usize]| -> Vec<Vec<Rat>> {
            idx.iter().map(|&a| points[a].clone()).collect()
        };
        let system =
            ExactHullSystem::new(2, vec![hull_of(&r.part_pos), hull_of(&r.part_neg)]).unwrap();
        let (ok, _) = feasible_exact(&system);
        assert!(ok);
        assert!(point_in_hull_exact(&hull_of(&r.part_pos), &r.point));
        assert!(point_in_hull_exact(&hull_of(&r.part_neg), &r.point));
    }

    #[test]
    fn exact_witness_of_interval_overlap_is_rational() {
        let hulls = vec![
            vec![vec![rat(1, 3)], vec![rat_int(2)]],
            vec![vec![rat_int(0)], vec![rat(1, 2)]],
        ];
        let system = ExactHullSystem::new(1, hulls).unwrap();
        let (ok, witness) = feasible_exact(&system);
        assert!(ok);
        let p = witness.unwrap()[0].clone();
        assert!(p >= rat(1, 3) && p <= rat(1, 2));
    }
}
