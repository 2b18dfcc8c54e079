//! Christoffel–Darboux kernel toolkit for orthogonal polynomials on the
//! real line and on the unit circle.
//!
//! Everything downstream runs on [`AtomicMeasure`]: analytic weights are
//! discretized once, recurrence coefficients are extracted by inner
//! products against the atoms, and kernels, quadrature rules and the
//! scaling-limit experiments are built from those coefficients.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod kernel;
pub mod measures;
pub mod oprl;
pub mod opuc;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod sum;
pub mod table;
pub mod updates;

pub use error::{Error, Result};
pub use kernel::{KernelRoute, KernelValue};
pub use measures::{AtomicMeasure, MeasureKind, MomentMatrix, NamedMeasure, SupportKind};
pub use oprl::{JacobiParams, PolyEval};
pub use opuc::{CirclePolyEval, VerblunskyParams};
pub use quadrature::{Anchor, QuadratureRule, TruncatedJacobi};
pub use num_complex::Complex64;

/// Crate version, echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
