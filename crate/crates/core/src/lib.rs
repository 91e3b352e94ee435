//! Exact computation of the Catlin multitype of a real hypersurface germ
//! `v = F(z, z̄, u)` in `C^{n+1}` given by a polynomial defining function.
//!
//! All arithmetic happens over the Gaussian rationals. The pipeline:
//!
//! * [`poly_core`]: coefficients, truncated jets and holomorphic polynomials.
//! * [`weights`]: weights, weighted degrees, adaptedness and generating sequences.
//! * [`transforms`]: polynomial biholomorphisms and re-graphing of `v = F`.
//! * [`engine`]: the stage-by-stage multitype computation and a brute-force oracle.
//! * [`normalize`]: regular coordinates, leading terms and model normalization.
//! * [`models`]: model extraction and verified maps between models.
//! * [`cli`]: input parsing and report serialization used by the binary.

pub mod cli;
pub mod engine;
pub mod linalg;
pub mod models;
pub mod normalize;
pub mod poly_core;
pub mod transforms;
pub mod weights;

pub use engine::{compute_multitype, EngineError, EngineOptions, MultitypeEntry, MultitypeResult};
pub use poly_core::{GaussRational, HoloPoly, Jet, MonomialKey, Rational, RealJet};
pub use transforms::{Direction, HoloMap};
pub use weights::Weight;
pub use models::{equivalence_map, verify_model_map, ModelError};
pub use normalize::{normalize_model, NormalizationReport};
