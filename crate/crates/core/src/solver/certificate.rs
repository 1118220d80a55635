//! Certificates and the verifier.
//!
//! A certificate stores everything needed to re-check the claim from raw data:
//! the per-set bipartitions, a basis of the direction complement L, the common
//! projected point p in that basis, and convex weights per part that hit p
//! under the projection. All numbers are exact rationals; float-produced
//! certificates embed their doubles as exact dyadics, so serialization is
//! lossless in both modes.
//!
//! The verifier recomputes the residual from scratch. When every identity
//! holds exactly, the report says so (exact acceptance); otherwise acceptance
//! is by float residual against the caller's tolerance. The basis need not be
//! orthonormal: rational bases of interesting subspaces rarely are, so the
//! verifier checks exact full rank instead and orthonormalizes internally for
//! the float residual.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed};

use crate::config::Tolerances;
use crate::error::MalformedCertificate;
use crate::exact::{self, RatMat};
use crate::geom::{ExactSubspace, Subspace};
use crate::scalar::{rat_to_f64, rat_zero, Rat};
use crate::solver::instance::{Bipartition, Instance};

/// Witness of a solution: partitions + flat + weights + residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub bipartitions: Bipartition,
    /// Basis of the direction complement L, d×(d−k), columns independent.
    pub l_basis: RatMat,
    /// Coordinates of the common projected point in the basis of L.
    pub common_point: Vec<Rat>,
    /// Per set: convex weights over the first and second part's points.
    pub weights: Vec<(Vec<Rat>, Vec<Rat>)>,
    /// Residual recorded at production time (verify recomputes its own).
    pub residual: f64,
}

/// How the verifier should treat exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Try exact equality first, fall back to the float residual.
    Auto,
    /// Float residual only (used inside the search loop).
    FloatOnly,
    /// Accept only on exact equality.
    RequireExact,
}

/// Outcome of verification. `residual` is the recomputed max over parts of
/// the ambient distance between the projected weighted combination and the
/// common point.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub accepted: bool,
    /// True when every identity held exactly in rational arithmetic.
    pub exact: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} ({}, residual {:.3e}, tol {:.3e})",
            if self.accepted { "accept" } else { "reject" },
            if self.exact { "exact" } else { "approximate" },
            self.residual,
            self.tolerance
        )
    }
}

/// Recomputes everything from raw data and accepts iff the residual is within
/// `tol` (or exact, per `mode`).
pub fn verify(
    instance: &Instance,
    cert: &Certificate,
    tol: f64,
    mode: VerifyMode,
    tols: &Tolerances,
) -> Result<VerifyReport, MalformedCertificate> {
    structural_checks(instance, cert, tols)?;

    let d = instance.d();
    let m = d - instance.k();

    // Exact path: projection via normal equations on the rational basis.
    let exact_ok = if mode == VerifyMode::FloatOnly {
        false
    } else {
        exact_residual_is_zero(instance, cert)
    };

    // Float path: orthonormalize the basis internally, measure in ambient space.
    let basis_f = DMatrix::from_fn(d, m, |i, j| rat_to_f64(&cert.l_basis[(i, j)]));
    let cols: Vec<DVector<f64>> = basis_f.column_iter().map(|c| c.into()).collect();
    let q = Subspace::orthonormalize(&cols, tols).map_err(|e| {
        MalformedCertificate::new("L_basis", format!("not numerically full rank: {e}"))
    })?;
    let p_coords = DVector::from_iterator(m, cert.common_point.iter().map(rat_to_f64));
    let p_ambient = &basis_f * p_coords;

    let mut residual: f64 = 0.0;
    for (i, (split, (w1, w2))) in cert
        .bipartitions
        .splits
        .iter()
        .zip(&cert.weights)
        .enumerate()
    {
        let points = instance.set_float(i);
        for (part, w) in [(&split.first, w1), (&split.second, w2)] {
            let mut combo = DVector::zeros(d);
            for (&idx, wa) in part.iter().zip(w) {
                combo.axpy(rat_to_f64(wa), &points.column(idx).into_owned(), 1.0);
            }
            let projected = q.embed(&q.project(&combo).expect("dimensions agree"));
            residual = residual.max((projected - &p_ambient).norm());
        }
    }

    let accepted = match mode {
        VerifyMode::RequireExact => exact_ok,
        _ => exact_ok || residual <= tol,
    };
    Ok(VerifyReport {
        accepted,
        exact: exact_ok,
        residual: if exact_ok { 0.0 } else { residual },
        tolerance: tol,
    })
}

fn structural_checks(
    instance: &Instance,
    cert: &Certificate,
    tols: &Tolerances,
) -> Result<(), MalformedCertificate> {
    cert.bipartitions
        .validate(instance, false)
        .map_err(|e| MalformedCertificate::new("bipartitions", e))?;

    let d = instance.d();
    let m = d - instance.k();
    if cert.l_basis.nrows() != d || cert.l_basis.ncols() != m {
        return Err(MalformedCertificate::new(
            "L_basis",
            format!(
                "expected {d}x{m}, got {}x{}",
                cert.l_basis.nrows(),
                cert.l_basis.ncols()
            ),
        ));
    }
    let rank = cert.l_basis.rank();
    if rank != m {
        return Err(MalformedCertificate::new(
            "L_basis",
            format!("rank {rank}, expected {m}"),
        ));
    }
    if cert.common_point.len() != m {
        return Err(MalformedCertificate::new(
            "p",
            format!("expected length {m}, got {}", cert.common_point.len()),
        ));
    }
    if cert.weights.len() != cert.bipartitions.splits.len() {
        return Err(MalformedCertificate::new(
            "weights",
            format!(
                "expected {} weight pairs, got {}",
                cert.bipartitions.splits.len(),
                cert.weights.len()
            ),
        ));
    }
    let slack = Rat::from_float(tols.weight_slack).expect("finite slack");
    for (i, (split, (w1, w2))) in cert
        .bipartitions
        .splits
        .iter()
        .zip(&cert.weights)
        .enumerate()
    {
        for (label, part, w) in [("first", &split.first, w1), ("second", &split.second, w2)] {
            if part.len() != w.len() {
                return Err(MalformedCertificate::new(
                    format!("weights[{i}].{label}"),
                    format!("{} weights for {} indices", w.len(), part.len()),
                ));
            }
            if let Some(bad) = w.iter().find(|x| x.is_negative()) {
                return Err(MalformedCertificate::new(
                    format!("weights[{i}].{label}"),
                    format!("negative weight {}", crate::scalar::format_rat(bad)),
                ));
            }
            let sum: Rat = w.iter().cloned().fold(rat_zero(), |a, b| a + b);
            if (sum - Rat::one()).abs() > slack {
                return Err(MalformedCertificate::new(
                    format!("weights[{i}].{label}"),
                    "weights do not sum to 1".to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// True iff every certificate identity holds in exact arithmetic: convex
/// weights sum to one exactly and every part's weighted combination projects
/// exactly onto the common point.
fn exact_residual_is_zero(instance: &Instance, cert: &Certificate) -> bool {
    let Ok(sub) = ExactSubspace::new(cert.l_basis.clone()) else {
        return false;
    };
    for (i, (split, (w1, w2))) in cert
        .bipartitions
        .splits
        .iter()
        .zip(&cert.weights)
        .enumerate()
    {
        let set = &instance.sets()[i];
        for (part, w) in [(&split.first, w1), (&split.second, w2)] {
            let sum: Rat = w.iter().cloned().fold(rat_zero(), |a, b| a + b);
            if !sum.is_one() {
                return false;
            }
            let d = instance.d();
            let mut combo = vec![rat_zero(); d];
            for (&idx, wa) in part.iter().zip(w) {
                for (c, x) in combo.iter_mut().zip(&set[idx]) {
                    *c += wa * x;
                }
            }
            match sub.project(&combo) {
                Ok(coords) if coords == cert.common_point => {}
                _ => return false,
            }
        }
    }
    true
}

impl Certificate {
    /// Transports the certificate along the exact affine map x ↦ Ax + t
    /// (A invertible). The new direction complement basis is A·B; the new
    /// anchor is recomputed exactly from a point of the transported flat.
    pub fn transformed(&self, a: &RatMat, t: &[Rat]) -> Certificate {
        let new_basis = a.mat_mul(&self.l_basis);
        // q0 = B·p lies on the original flat; its image spans the new anchor.
        let q0 = self.l_basis.mat_vec(&self.common_point);
        let moved = exact::add(&a.mat_vec(&q0), t);
        let sub = ExactSubspace::new(new_basis.clone()).expect("A invertible keeps rank");
        let anchor = sub.project(&moved).expect("dimensions agree");
        Certificate {
            bipartitions: self.bipartitions.clone(),
            l_basis: new_basis,
            common_point: anchor,
            weights: self.weights.clone(),
            residual: self.residual,
        }
    }
}
