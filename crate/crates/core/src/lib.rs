//! Local-unitary orbit dimensions of multipartite mixed quantum states.
//!
//! - [`numerics`]: dense complex linear algebra, real coordinatizations and
//!   tolerance-governed rank/kernel computation.
//! - [`states`]: the witness operator and its generators, density matrices,
//!   random and special states.
//! - [`stabilizer`]: the infinitesimal local action, stabilizer algebras and
//!   orbit dimensions.
//! - [`harness`]: theorem sweeps, surveys and report emission.

pub mod error;
pub mod harness;
pub mod numerics;
pub mod stabilizer;
pub mod states;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, TolerancePolicy};
pub use stabilizer::{stabilize, StabilizerReport};
pub use states::{DensityMatrix, PartyDims};
