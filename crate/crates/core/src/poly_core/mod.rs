//! Exact sparse arithmetic over `Q(i)`: coefficients, real jets in
//! `z, z̄, u`, and holomorphic polynomials in `z, w`.

pub mod gauss;
pub mod factor;
pub mod holo;
pub mod jet;
pub mod roots;
pub mod sparse;

pub use gauss::{rat, GaussRational, Rational};
pub use holo::HoloPoly;
pub use jet::{Jet, LeadingTermIndex, MonomialKey, RealJet, RealnessViolation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}
