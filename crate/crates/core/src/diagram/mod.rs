//! Trapezia of computations, their cell census, side-by-side gluing and the bound functions.

mod bounds;
mod glue;
mod svg;
mod trapezium;
mod witness;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::engine::EngineError;

pub use bounds::{big_psi, bounds_table, index_pair, log_prime, small_psi, BoundsRow};
pub use glue::{explicit_glue, glue, ExplicitComplex, GluedDiagram, EXPLICIT_HEIGHT_CAP};
pub use svg::trapezium_svg;
pub use trapezium::{
    area_constant, band_bound_violations, build_trapezium, build_trapezium_streamed, Band, Trapezium,
};
pub use witness::{copies_for, lower_bound_witness, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("trapezium needs a materialized trace")]
    StreamedTraceUnsupported,
    #[error("trace disagrees with the rule applied at step {step}")]
    TraceMismatch { step: usize },
    #[error("height {height} exceeds the explicit complex cap {cap}")]
    TooTall { height: usize, cap: usize },
    #[error("seam labels differ between copy {copy} and its left neighbour at band {band}")]
    SeamMismatch { copy: usize, band: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[cfg(test)]
mod tests;
