//! Solver and verifier for 2-part Tverberg transversals.
//!
//! Given k+1 finite point sets in R^d, each of d−k+2 points, there is always a
//! way to split every set into two parts and a k-dimensional affine flat that
//! meets the convex hulls of all 2(k+1) parts. This crate finds such a flat by
//! searching the Grassmannian of direction complements, and emits a certificate
//! (partitions, flat, convex weights, residual) that can be re-checked from raw
//! data — exactly, when the certificate is all-rational.
//!
//! Layout:
//! - [`scalar`], [`exact`], [`geom`]: rational and floating-point linear
//!   algebra for points, subspaces, flats and Grassmannian charts.
//! - [`radon`]: exact and floating-point Radon partitions (the k = 0 case).
//! - [`feasibility`]: common-point gap of a family of hulls (Frank–Wolfe /
//!   alternating minimization) and an exact rational LP oracle.
//! - [`solver`]: the search strategies, certificates and the verifier.
//! - [`instances`]: the parallel-planes gadget with its known exact solution,
//!   random families and degenerate stress families.
//! - [`io`], [`sweep`], [`cli`]: file formats, the Monte-Carlo harness and the
//!   command-line surface.

pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod feasibility;
pub mod geom;
pub mod instances;
pub mod io;
pub mod lp;
pub mod neldermead;
pub mod radon;
pub mod scalar;
pub mod solver;
pub mod sweep;

pub use config::Tolerances;
pub use error::GeomError;
pub use scalar::Rat;
