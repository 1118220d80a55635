//! Centralized numeric tolerances.
//!
//! Every float-mode comparison in the crate goes through one of these knobs so
//! that a single record controls the whole pipeline.

/// Tolerances used by the floating-point code paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max allowed entry of |BᵀB − I| for an orthonormal basis.
    pub orthonormality: f64,
    /// Mutual projection residual below which two subspaces are considered equal.
    pub subspace_equality: f64,
    /// Residual threshold for accepting a certificate.
    pub certificate_residual: f64,
    /// Relative rank cutoff for numerical rank decisions (sigma_min / sigma_max).
    pub rank_cutoff: f64,
    /// Relative singular-value ratio below which a kernel direction counts as ambiguous.
    pub kernel_ambiguity: f64,
    /// Slack on convex-weight sums (|sum − 1|) and on weight negativity.
    pub weight_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthonormality: 1e-12,
            subspace_equality: 1e-10,
            certificate_residual: 1e-6,
            rank_cutoff: 1e-12,
            kernel_ambiguity: 1e-7,
            weight_slack: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_certificate_residual(mut self, tol: f64) -> Self {
        self.certificate_residual = tol;
        self
    }
}
