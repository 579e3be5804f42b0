//! Pseudo-spectral solver for the 3-D generalized Navier–Stokes system on a
//! periodic box, together with the Gevrey-analyticity diagnostics used to
//! study the short-time growth of the analyticity radius.
//!
//! * [`spectral`] — grid, transforms, dealiasing, shell reductions.
//! * [`operator`] — the bilinear map `Q`, Leray projector and heat semigroup.
//! * [`mild`] — Duhamel operator, Picard iteration and an integrating-factor
//!   RK4 oracle.
//! * [`diagnostics`] — Sobolev/Gevrey norms, tail functionals, radius
//!   predictors, radius estimation and bound reports.

pub mod diagnostics;
pub mod mild;
pub mod operator;
pub mod par;
pub mod spectral;

pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
