//! Radon partitions: split m+2 (or more) points in R^m into two parts whose
//! convex hulls share a point, together with the affine dependence that
//! witnesses the split.
//!
//! The exact path runs deterministic rational elimination and backs the k = 0
//! case of the solver as well as every certificate that must verify exactly.
//! The float path runs inside the Grassmannian search loop and reads the
//! dependence off the smallest eigenvector of the lifted Gram matrix, with an
//! explicit conditioning check.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use crate::config::Tolerances;
use crate::error::GeomError;
use crate::exact::RatMat;
use crate::scalar::{rat_sign, rat_zero, Rat};

/// Coefficients λ with Σλ = 0 and Σλx = 0, normalized to Σ|λ| = 1 with the
/// first nonzero coefficient positive.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineDependence<T> {
    pub coefficients: Vec<T>,
}

/// A Radon partition with its common point and the convex weights that express
/// the point inside each part's hull. Zero-coefficient indices belong to
/// neither part; hull monotonicity lets consumers enlarge parts freely.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonResult<T> {
    pub part_pos: Vec<usize>,
    pub part_neg: Vec<usize>,
    pub zeros: Vec<usize>,
    pub point: Vec<T>,
    pub weights_pos: Vec<T>,
    pub weights_neg: Vec<T>,
}

fn lifted_exact(points: &[Vec<Rat>]) -> Result<RatMat, GeomError> {
    let n = points.len();
    let m = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != m) {
        return Err(GeomError::Invalid("points of mixed dimension".into()));
    }
    if n < m + 2 {
        return Err(GeomError::Invalid(format!(
            "need at least {} points in R^{m}, got {n}",
            m + 2
        )));
    }
    let mut mat = RatMat::zeros(m + 1, n);
    for (a, p) in points.iter().enumerate() {
        mat[(0, a)] = Rat::from_integer(1.into());
        for (i, c) in p.iter().enumerate() {
            mat[(i + 1, a)] = c.clone();
        }
    }
    Ok(mat)
}

/// Exact affine dependence: the first kernel basis vector of the lifted matrix
/// under the deterministic elimination of [`RatMat::nullspace`], normalized.
pub fn affine_dependence_exact(points: &[Vec<Rat>]) -> Result<AffineDependence<Rat>, GeomError> {
    let lifted = lifted_exact(points)?;
    let kernel = lifted.nullspace();
    let raw = kernel
        .into_iter()
        .next()
        .ok_or_else(|| GeomError::Invalid("trivial kernel: points affinely independent".into()))?;
    let total: Rat = raw.iter().map(Signed::abs).fold(rat_zero(), |a, b| a + b);
    let mut coeffs: Vec<Rat> = raw.into_iter().map(|c| c / &total).collect();
    if let Some(first) = coeffs.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut coeffs {
                *c = -c.clone();
            }
        }
    }
    Ok(AffineDependence {
        coefficients: coeffs,
    })
}

/// Float affine dependence of the columns of `points` (m×n). The dependence is
/// the eigenvector of the smallest eigenvalue of MᵀM where M is the lifted
/// matrix; errors with [`GeomError::IllConditioned`] when the second-smallest
/// singular value is within `tol.kernel_ambiguity` of the largest, i.e. when
/// the kernel direction is numerically ambiguous and the caller should perturb.
pub fn affine_dependence_float(
    points: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<AffineDependence<f64>, GeomError> {
    let (m, n) = (points.nrows(), points.ncols());
    if n < m + 2 {
        return Err(GeomError::Invalid(format!(
            "need at least {} points in R^{m}, got {n}",
            m + 2
        )));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let mut lifted = DMatrix::zeros(m + 1, n);
    lifted.row_mut(0).fill(1.0);
    lifted.rows_mut(1, m).copy_from(points);
    let gram = lifted.transpose() * &lifted;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let lambda_max = eig.eigenvalues[idx[n - 1]].max(f64::MIN_POSITIVE);
    let second = eig.eigenvalues[idx[1]].max(0.0);
    let ratio = (second / lambda_max).sqrt();
    if ratio <= tol.kernel_ambiguity {
        return Err(GeomError::IllConditioned { ratio });
    }
    let v = eig.eigenvectors.column(idx[0]);
    let total: f64 = v.iter().map(|c| c.abs()).sum();
    let mut coeffs: Vec<f64> = v.iter().map(|c| c / total).collect();
    let peak = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if let Some(first) = coeffs.iter().find(|c| c.abs() > 1e-12 * peak) {
        if *first < 0.0 {
            for c in &mut coeffs {
                *c = -*c;
            }
        }
    }
    Ok(AffineDependence {
        coefficients: coeffs,
    })
}

/// Exact Radon partition of at least m+2 points in R^m.
pub fn radon_partition_exact(points: &[Vec<Rat>]) -> Result<RadonResult<Rat>, GeomError> {
    let dep = affine_dependence_exact(points)?;
    let mut part_pos = Vec::new();
    let mut part_neg = Vec::new();
    let mut zeros = Vec::new();
    for (a, c) in dep.coefficients.iter().enumerate() {
        match rat_sign(c) {
            1 => part_pos.push(a),
            -1 => part_neg.push(a),
            _ => zeros.push(a),
        }
    }
    let pos_sum: Rat = part_pos
        .iter()
        .map(|&a| dep.coefficients[a].clone())
        .fold(rat_zero(), |s, c| s + c);
    let weights_pos: Vec<Rat> = part_pos
        .iter()
        .map(|&a| &dep.coefficients[a] / &pos_sum)
        .collect();
    let weights_neg: Vec<Rat> = part_neg
        .iter()
        .map(|&a| -&dep.coefficients[a] / &pos_sum)
        .collect();
    let m = points[0].len();
    let mut point = vec![rat_zero(); m];
    for (w, &a) in weights_pos.iter().zip(&part_pos) {
        for (i, c) in points[a].iter().enumerate() {
            point[i] += w * c;
        }
    }
    Ok(RadonResult {
        part_pos,
        part_neg,
        zeros,
        point,
        weights_pos,
        weights_neg,
    })
}

/// Float Radon partition of the columns of `points`. Coefficients within
/// 1e−12 of zero (relative to the largest) are treated as zeros.
pub fn radon_partition_float(
    points: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<RadonResult<f64>, GeomError> {
    let dep = affine_dependence_float(points, tol)?;
    radon_from_dependence_float(points, &dep)
}

/// Reads the partition and Radon point off an existing float dependence.
pub fn radon_from_dependence_float(
    points: &DMatrix<f64>,
    dep: &AffineDependence<f64>,
) -> Result<RadonResult<f64>, GeomError> {
    let peak = dep.coefficients.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let zero_cut = 1e-12 * peak;
    let mut part_pos = Vec::new();
    let mut part_neg = Vec::new();
    let mut zeros = Vec::new();
    for (a, &c) in dep.coefficients.iter().enumerate() {
        if c.abs() <= zero_cut {
            zeros.push(a);
        } else if c > 0.0 {
            part_pos.push(a);
        } else {
            part_neg.push(a);
        }
    }
    if part_pos.is_empty() || part_neg.is_empty() {
        return Err(GeomError::Invalid(
            "degenerate dependence: one side of the partition is empty".into(),
        ));
    }
    let pos_sum: f64 = part_pos.iter().map(|&a| dep.coefficients[a]).sum();
    let weights_pos: Vec<f64> = part_pos
        .iter()
        .map(|&a| dep.coefficients[a] / pos_sum)
        .collect();
    let weights_neg: Vec<f64> = part_neg
        .iter()
        .map(|&a| -dep.coefficients[a] / pos_sum)
        .collect();
    let m = points.nrows();
    let mut point = DVector::zeros(m);
    for (w, &a) in weights_pos.iter().zip(&part_pos) {
        point.axpy(*w, &points.column(a).into_owned(), 1.0);
    }
    Ok(RadonResult {
        part_pos,
        part_neg,
        zeros,
        point: point.iter().copied().collect(),
        weights_pos,
        weights_neg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn square_diagonals() {
        let dep =
            affine_dependence_exact(&pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(
            dep.coefficients,
            vec![rat(1, 4), rat(-1, 4), rat(1, 4), rat(-1, 4)]
        );
        let r = radon_partition_exact(&pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(r.part_pos, vec![0, 2]);
        assert_eq!(r.part_neg, vec![1, 3]);
        assert!(r.zeros.is_empty());
        assert_eq!(r.point, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn triangle_with_interior_point() {
        let p = pts(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        let dep = affine_dependence_exact(&p).unwrap();
        // Barycentric coordinates of (1,1) in the triangle, normalized.
        assert_eq!(
            dep.coefficients,
            vec![rat(1, 4), rat(1, 8), rat(1, 8), rat(-1, 2)]
        );
        let r = radon_partition_exact(&p).unwrap();
        assert_eq!(r.part_pos, vec![0, 1, 2]);
        assert_eq!(r.part_neg, vec![3]);
        assert_eq!(r.point, vec![rat_int(1), rat_int(1)]);
        assert_eq!(r.weights_neg, vec![rat_int(1)]);
    }

    #[test]
    fn collinear_points_take_deterministic_kernel_vector() {
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0], &[3, 0]]);
        let dep = affine_dependence_exact(&p).unwrap();
        assert_eq!(
            dep.coefficients,
            vec![rat(1, 4), rat(-1, 2), rat(1, 4), rat_int(0)]
        );
        // Witness identities hold exactly.
        let sum: Rat = dep.coefficients.iter().cloned().sum();
        assert!(sum.is_zero());
        for i in 0..2 {
            let mut acc = rat_zero();
            for (c, pt) in dep.coefficients.iter().zip(&p) {
                acc += c * &pt[i];
            }
            assert!(acc.is_zero());
        }
        // Zero coefficient goes to neither part.
        let r = radon_partition_exact(&p).unwrap();
        assert_eq!(r.zeros, vec![3]);
        assert_eq!(r.part_pos, vec![0, 2]);
        assert_eq!(r.part_neg, vec![1]);
        assert_eq!(r.point, vec![rat_int(1), rat_int(0)]);
    }

    #[test]
    fn two_sided_point_identity() {
        let p = pts(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        let r = radon_partition_exact(&p).unwrap();
        let mut from_neg = vec![rat_zero(); 2];
        for (w, &a) in r.weights_neg.iter().zip(&r.part_neg) {
            for i in 0..2 {
                from_neg[i] += w * &p[a][i];
            }
        }
        assert_eq!(from_neg, r.point);
        let wsum: Rat = r.weights_pos.iter().cloned().sum();
        assert_eq!(wsum, rat_int(1));
        let wsum: Rat = r.weights_neg.iter().cloned().sum();
        assert_eq!(wsum, rat_int(1));
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(affine_dependence_exact(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn float_matches_exact_on_square() {
        let m = DMatrix::from_columns(&[
            nalgebra::dvector![0.0, 0.0],
            nalgebra::dvector![1.0, 0.0],
            nalgebra::dvector![1.0, 1.0],
            nalgebra::dvector![0.0, 1.0],
        ]);
        let r = radon_partition_float(&m, &Tolerances::default()).unwrap();
        assert_eq!(r.part_pos, vec![0, 2]);
        assert_eq!(r.part_neg, vec![1, 3]);
        assert!((r.point[0] - 0.5).abs() < 1e-12);
        assert!((r.point[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn float_flags_ambiguous_kernels() {
        // Four collinear points in R^2: kernel dimension 2.
        let m = DMatrix::from_columns(&[
            nalgebra::dvector![0.0, 0.0],
            nalgebra::dvector![1.0, 0.0],
            nalgebra::dvector![2.0, 0.0],
            nalgebra::dvector![3.0, 0.0],
        ]);
        match affine_dependence_float(&m, &Tolerances::default()) {
            Err(GeomError::IllConditioned { .. }) => {}
            other => panic!("expected IllConditioned, got {other:?}"),
        }
    }

    #[test]
    fn float_repeated_point_is_well_conditioned() {
        // Two equal points leave a one-dimensional kernel: fine.
        let m = DMatrix::from_columns(&[
            nalgebra::dvector![1.0],
            nalgebra::dvector![1.0],
            nalgebra::dvector![3.0],
        ]);
        let r = radon_partition_float(&m, &Tolerances::default()).unwrap();
        assert_eq!(r.part_pos, vec![0]);
        assert_eq!(r.part_neg, vec![1]);
        assert_eq!(r.zeros, vec![2]);
        assert!((r.point[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_dependence_is_deterministic() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        assert_eq!(
            affine_dependence_exact(&p).unwrap(),
            affine_dependence_exact(&p).unwrap()
        );
    }

    #[test]
    fn affine_equivariance_exact() {
        // Invertible affine map A(x) = Mx + t with rational entries.
        let p = pts(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        let apply = |x: &Vec<Rat>| -> Vec<Rat> {
            vec![
                rat_int(2) * &x[0] + rat_int(1) * &x[1] + rat_int(3),
                rat_int(-1) * &x[0] + rat_int(1) * &x[1] + rat_int(5),
            ]
        };
        let q: Vec<Vec<Rat>> = p.iter().map(apply).collect();
        let r1 = radon_partition_exact(&p).unwrap();
        let r2 = radon_partition_exact(&q).unwrap();
        assert_eq!(r1.part_pos, r2.part_pos);
        assert_eq!(r1.part_neg, r2.part_neg);
        assert_eq!(apply(&r1.point), r2.point);
    }
}
