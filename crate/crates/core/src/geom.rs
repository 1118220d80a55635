//! Points, subspaces, flats and orthogonal projections, in both numeric modes.
//!
//! Float-mode subspaces carry an orthonormal basis and feed the Grassmannian
//! search; exact-mode subspaces carry a linearly independent rational basis
//! and feed certificate generation and verification. A k-flat is stored
//! through its direction complement L (a (d−k)-subspace) plus the coordinates
//! of the common projected point in the basis of L: the flat is the fiber of
//! the orthogonal projection onto L over that point.
//!
//! Bases are non-canonical, so subspace equality is always mutual projection
//! residual, never basis comparison. The exact kernel routine lives in
//! [`crate::exact`] (`RatMat::nullspace`).

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::config::Tolerances;
use crate::error::GeomError;
use crate::exact::RatMat;
use crate::scalar::Rat;

/// Float-mode linear subspace of R^d with an orthonormal basis (d×m columns).
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Orthonormalizes the given spanning vectors (modified Gram–Schmidt with
    /// a re-orthogonalization pass). The first output column is parallel to
    /// the first input vector.
    pub fn orthonormalize(vectors: &[DVector<f64>], tol: &Tolerances) -> Result<Self, GeomError> {
        let Some(first) = vectors.first() else {
            return Ok(Subspace {
                basis: DMatrix::zeros(0, 0),
            });
        };
        let d = first.len();
        let mut cols: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
        for (idx, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(GeomError::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::NonFinite);
            }
            let scale = v.norm();
            let mut w = v.clone();
            for _ in 0..2 {
                for q in &cols {
                    let c = q.dot(&w);
                    w.axpy(-c, q, 1.0);
                }
            }
            let n = w.norm();
            if n <= tol.rank_cutoff * scale.max(1e-300) {
                return Err(GeomError::RankDeficient {
                    rank: idx,
                    expected: vectors.len(),
                });
            }
            cols.push(w / n);
        }
        Ok(Subspace {
            basis: DMatrix::from_columns(&cols),
        })
    }

    /// Wraps an already orthonormal basis, checking ‖BᵀB − I‖_max.
    pub fn from_orthonormal(basis: DMatrix<f64>, tol: &Tolerances) -> Result<Self, GeomError> {
        let m = basis.ncols();
        let gram = basis.transpose() * &basis;
        let dev = (&gram - DMatrix::<f64>::identity(m, m)).abs().max();
        if m > 0 && dev > tol.orthonormality {
            return Err(GeomError::Invalid(format!(
                "basis not orthonormal (max deviation {dev:.3e})"
            )));
        }
        Ok(Subspace { basis })
    }

    /// Uniformly random m-subspace: orthonormalized Gaussian columns.
    pub fn random<R: Rng>(d: usize, m: usize, rng: &mut R, tol: &Tolerances) -> Self {
        loop {
            let cols: Vec<DVector<f64>> = (0..m)
                .map(|_| {
                    DVector::from_fn(d, |_, _| {
                        rng.sample::<f64, _>(rand_distr::StandardNormal)
                    })
                })
                .collect();
            if let Ok(s) = Subspace::orthonormalize(&cols, tol) {
                return s;
            }
        }
    }

    pub fn full(d: usize) -> Self {
        Subspace {
            basis: DMatrix::identity(d, d),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Coordinates of the orthogonal projection of `x` in this basis.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>, GeomError> {
        if x.len() != self.ambient_dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(self.basis.transpose() * x)
    }

    /// Maps basis coordinates back to the ambient space.
    pub fn embed(&self, coords: &DVector<f64>) -> DVector<f64> {
        &self.basis * coords
    }

    /// Orthonormal basis of the orthogonal complement, built by greedily
    /// orthogonalizing coordinate vectors (largest residual first).
    pub fn complement(&self, tol: &Tolerances) -> Subspace {
        let d = self.ambient_dim();
        let target = d - self.dim();
        let mut cols: Vec<DVector<f64>> = self.basis.column_iter().map(|c| c.into()).collect();
        let mut picked: Vec<DVector<f64>> = Vec::with_capacity(target);
        for _ in 0..target {
            let mut best: Option<(f64, DVector<f64>)> = None;
            for i in 0..d {
                let mut w = DVector::zeros(d);
                w[i] = 1.0;
                for _ in 0..2 {
                    for q in &cols {
                        let c = q.dot(&w);
                        w.axpy(-c, q, 1.0);
                    }
                }
                let n = w.norm();
                if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                    best = Some((n, w));
                }
            }
            let (n, w) = best.expect("ambient dimension is positive");
            let q = w / n;
            cols.push(q.clone());
            picked.push(q);
        }
        let _ = tol;
        if picked.is_empty() {
            Subspace {
                basis: DMatrix::zeros(d, 0),
            }
        } else {
            Subspace {
                basis: DMatrix::from_columns(&picked),
            }
        }
    }

    /// Mutual projection residual equality test.
    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        if self.ambient_dim() != other.ambient_dim() || self.dim() != other.dim() {
            return false;
        }
        let res = |a: &Subspace, b: &Subspace| -> f64 {
            let mut worst: f64 = 0.0;
            for col in b.basis.column_iter() {
                let c: DVector<f64> = col.into();
                let proj = a.embed(&(a.basis.transpose() * &c));
                worst = worst.max((&c - proj).norm());
            }
            worst
        };
        res(self, other) <= tol && res(other, self) <= tol
    }

    /// Distance between subspaces: the spectral norm of the difference of the
    /// two orthogonal projectors (the sine of the largest principal angle).
    pub fn distance(&self, other: &Subspace) -> f64 {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        let p1 = &self.basis * self.basis.transpose();
        let p2 = &other.basis * other.basis.transpose();
        let diff = p1 - p2;
        let eig = nalgebra::SymmetricEigen::new(diff);
        eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Local chart of the Grassmannian around `center`: the subspace spanned by
/// B0 + C0·T, re-orthonormalized, where C0 is the orthogonal complement of
/// the chart center and T is a (d−m)×m parameter matrix. T = 0 recovers the
/// center.
pub fn chart_retract(
    center: &Subspace,
    params: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<Subspace, GeomError> {
    let m = center.dim();
    let comp = center.complement(tol);
    if params.nrows() != comp.dim() || params.ncols() != m {
        return Err(GeomError::DimensionMismatch {
            expected: comp.dim() * m,
            got: params.nrows() * params.ncols(),
        });
    }
    if params.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let raw = center.basis() + comp.basis() * params;
    let cols: Vec<DVector<f64>> = raw.column_iter().map(|c| c.into()).collect();
    Subspace::orthonormalize(&cols, tol)
}

/// Float-mode affine k-flat, stored as the fiber of the projection onto its
/// direction complement over `anchor` (coordinates in the basis of L).
#[derive(Debug, Clone)]
pub struct Flat {
    pub complement: Subspace,
    pub anchor: DVector<f64>,
}

impl Flat {
    pub fn from_projection(complement: Subspace, anchor: DVector<f64>) -> Result<Self, GeomError> {
        if anchor.len() != complement.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: complement.dim(),
                got: anchor.len(),
            });
        }
        Ok(Flat { complement, anchor })
    }

    /// Affine dimension of the flat.
    pub fn dim(&self) -> usize {
        self.complement.ambient_dim() - self.complement.dim()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> Result<bool, GeomError> {
        let p = self.complement.project(x)?;
        Ok((p - &self.anchor).norm() <= tol)
    }
}

/// Exact-mode linear subspace: rational basis with exactly independent columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSubspace {
    basis: RatMat,
}

impl ExactSubspace {
    pub fn new(basis: RatMat) -> Result<Self, GeomError> {
        let rank = basis.rank();
        if rank < basis.ncols() {
            return Err(GeomError::RankDeficient {
                rank,
                expected: basis.ncols(),
            });
        }
        Ok(ExactSubspace { basis })
    }

    pub fn full(d: usize) -> Self {
        ExactSubspace {
            basis: RatMat::identity(d),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    /// Coordinates of the orthogonal projection of `x` in this basis, from the
    /// normal equations (BᵀB)c = Bᵀx. The Gram matrix is invertible because
    /// the columns are independent.
    pub fn project(&self, x: &[Rat]) -> Result<Vec<Rat>, GeomError> {
        if x.len() != self.ambient_dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        let bt = self.basis.transpose();
        let gram = bt.mat_mul(&self.basis);
        let rhs = bt.mat_vec(x);
        gram.solve(&rhs)
            .ok_or_else(|| GeomError::Invalid("singular Gram matrix".into()))
    }

    pub fn embed(&self, coords: &[Rat]) -> Vec<Rat> {
        self.basis.mat_vec(coords)
    }

    /// Rational basis of the orthogonal complement: the kernel of Bᵀ.
    pub fn complement(&self) -> ExactSubspace {
        let kernel = self.basis.transpose().nullspace();
        ExactSubspace {
            basis: RatMat::from_cols(&kernel),
        }
    }

    /// Exact equality as subspaces: each basis lies in the span of the other.
    pub fn spans_same(&self, other: &ExactSubspace) -> bool {
        if self.ambient_dim() != other.ambient_dim() || self.dim() != other.dim() {
            return false;
        }
        let contains = |a: &ExactSubspace, b: &ExactSubspace| -> bool {
            b.basis
                .columns()
                .iter()
                .all(|col| a.basis.solve(col).map_or(false, |c| a.embed(&c) == *col))
        };
        contains(self, other) && contains(other, self)
    }

    /// Float view of the basis (columns not normalized).
    pub fn to_float(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.ambient_dim(), self.dim(), |i, j| {
            crate::scalar::rat_to_f64(&self.basis[(i, j)])
        })
    }
}

/// Exact-mode affine flat, fiber over `anchor` in the basis of `complement`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFlat {
    pub complement: ExactSubspace,
    pub anchor: Vec<Rat>,
}

impl ExactFlat {
    pub fn from_projection(complement: ExactSubspace, anchor: Vec<Rat>) -> Result<Self, GeomError> {
        if anchor.len() != complement.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: complement.dim(),
                got: anchor.len(),
            });
        }
        Ok(ExactFlat { complement, anchor })
    }

    pub fn dim(&self) -> usize {
        self.complement.ambient_dim() - self.complement.dim()
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool, GeomError> {
        Ok(self.complement.project(x)? == self.anchor)
    }
}
