//! Measures on the real line and the unit circle.
//!
//! [`AtomicMeasure`] is the single representation used by every numeric
//! routine. [`NamedMeasure`] describes the analytic weights of the toolkit
//! and turns them into atomic form with [`NamedMeasure::discretize`].

mod atomic;
mod file;
mod gauss_legendre;
mod named;

pub use atomic::{AtomicMeasure, MomentMatrix, MomentStructure, SupportKind};
pub use file::{parse_measure_json, MeasureFile, MeasureSource};
pub use gauss_legendre::gauss_legendre;
pub use named::{MeasureKind, NamedMeasure, MIN_RESOLUTION, PANEL_ORDER};
