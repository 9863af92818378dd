//! Numerical evaluation of local smoothing charts of normal crossing
//! surfaces and the pointwise linear algebra of SU(2)-structures.
//!
//! Forms live at a single tangent space with real basis
//! `(dRe x, dIm x, dRe y, dIm y)`. Chart evaluators return the volume form
//! `Ω` and the Kähler form `ω` at a point, and [`suite`] checks every
//! identity relating them at seeded random points.

pub mod charts;
pub mod closedness;
pub mod forms;
pub mod projection;
pub mod su2;
pub mod suite;

use thiserror::Error;

pub use charts::{
    eval_c3_model, eval_h, eval_su2_double, eval_su2_triple, eval_t, ChartKind, Sign,
};
pub use closedness::{numerical_d, FormField};
pub use forms::{Form2, OneForm, C64};
pub use projection::project_theta;
pub use su2::{complex_structure_from, hodge_star, metric, sd_asd_split, SU2AtPoint, Su2Residuals};
pub use suite::{run_suite, IdentityResult, SuiteOptions, SuiteReport};

/// Errors raised by chart evaluation and structure computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    /// A point lies outside or too close to the edge of a chart domain.
    #[error("point outside the chart domain: {0}")]
    DomainError(String),
    /// A form does not determine a complex structure or metric.
    #[error("degenerate structure: {0}")]
    DegenerateStructure(String),
    /// The projector did not reach the residual target.
    #[error("projection did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        /// Iterations performed.
        iterations: usize,
        /// Final residual.
        residual: f64,
    },
}
