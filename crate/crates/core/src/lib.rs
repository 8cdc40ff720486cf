//! Numerical laboratory for the chemotaxis-growth system with nonlocal
//! reaction
//!
//! ```text
//! u_t = Δu − ∇·(u^σ ∇v) + u^α (1 − ∫ u^β dx),    v = K ∗ u,
//! ```
//!
//! where `K` is the Newtonian kernel. The whole space is approximated by a
//! periodic box and the equation is advanced pseudo-spectrally.
//!
//! - [`model`]: parameter validation, regime classification, exponent
//!   algebra of the energy estimates, existence-time majorant.
//! - [`spectral`]: grids, fields, transforms, potential and norms.
//! - [`integrators`]: the right-hand side, integrating-factor and
//!   mild-solution steppers, and the adaptive driver with blow-up detection.
//! - [`diagnostics`]: scaling, interpolation-inequality, `L^β`-bound and
//!   residual checks.
//! - [`runner`]: configuration files, sweeps and the aggregate check suite.

pub mod diagnostics;
pub mod error;
pub mod integrators;
pub mod model;
mod par;
pub mod runner;
pub mod spectral;

pub use error::{Error, Result};
