//! Numerical harmonic analysis on `G = SO(2,1)° ≅ PSL(2,ℝ)`.
//!
//! * [`groups`]: the group, its Iwasawa and Cartan coordinates, and Ψ.
//! * [`lie`]: the Lie algebra, exponential, and a finite-difference Casimir.
//! * [`hyperbolic`]: the upper half-plane, spherical functions, Laplacian.
//! * [`reps`]: induced representations in the compact picture and K-types.
//! * [`equivariant`]: K×K-equivariant functions and isotype projectors.
//! * [`character`]: Haar quadrature, `π(f)`, and the character identity.
//! * [`suite`]: the acceptance battery shared by the CLI and the tests.

pub mod error;
pub mod groups;
pub mod hyperbolic;
pub mod lie;
pub mod numeric;
pub mod character;
pub mod equivariant;
pub mod reps;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;
