//! Frames over the cell, tensor fields in frame components, the hole around
//! the spine and the deformation of fields toward it.

mod deform;
mod fld;
mod frame;
mod hole;
mod tensor;

use thiserror::Error;

use crate::chart::ChartError;

pub use deform::{
    continuity_report, deform_tensor, deformation_rows, reparametrize, Attribution,
    ContinuityReport, DeformCase, DeformRow, DeformTrace, DeformedField, Kink, Seam, SeamSample,
    SeamSummary, BASE_OFFSET, SEAM_TOL,
};
pub use fld::FieldSpec;
pub use frame::{extend_frame, gate_agreement, FrameField, GateAgreement, FRAME_DET_MIN};
pub use hole::{
    admissible_epsilon, black_hole_region, boundary_samples, HoleRegion, LineSplit,
    TAIL_FRACTION_MAX,
};
pub use tensor::{component_count, constant_tensor, to_affine, Evaluate, TensorField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("frame on top {top} is singular (det = {det})")]
    SingularFrame { top: usize, det: f64 },
    #[error("the complex has no vertex coordinates")]
    NoCoordinates,
    #[error("the field has no frame")]
    NoFrame,
    #[error("ε = {epsilon} is not in (0, {epsilon_max})")]
    Epsilon { epsilon: f64, epsilon_max: f64 },
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("field evaluation failed: {0}")]
    Evaluation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}
