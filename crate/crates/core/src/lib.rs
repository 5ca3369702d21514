//! Hodge decomposition machinery for differential forms on ℝⁿ.
//!
//! Two engines share one exterior-algebra kernel:
//!
//! * an exact symbolic engine for forms with rational polynomial
//!   coefficients (differential, codifferential, Laplacian, harmonic
//!   decomposition and a constructive inverse Laplacian), and
//! * a Fourier-multiplier engine for forms sampled on a periodic grid
//!   (Riesz potentials and transforms, the exact/coexact projectors and
//!   their potentials, and the Hodge decomposition θ = dα + δβ).
//!
//! On top of those sit direct-space oracles (Gamma-function constants,
//! singular-integral quadrature, moment checks) and an experiment harness
//! for the operator identities and norm-scaling laws the two engines are
//! expected to satisfy.

pub mod error;
pub mod experiments;
pub mod exterior;
pub mod grid;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
