//! Decomposition of a triangulated closed manifold into an open n-cell and a
//! codimension-one spine, with the broken-line chart of the cell, the
//! retraction of the punctured manifold onto the spine, an integer homology
//! oracle for that retraction, and deformation of tensor fields toward an
//! ε-neighbourhood of the spine.
//!
//! The pipeline:
//!
//! 1. [`complex`]: build and validate a [`SimplicialComplex`].
//! 2. [`spine`]: [`decompose`] it into gates (a dual spanning tree) and spine ridges.
//! 3. [`homology`]: compare spine homology with the punctured complex.
//! 4. [`chart`]: build the [`CellChart`], map points, trace broken lines, retract.
//! 5. [`fields`]: extend a frame over the cell and deform tensor fields.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod census;
pub mod chart;
pub mod complex;
pub mod export;
pub mod fields;
pub mod geometry;
pub mod homology;
pub mod spine;

pub use chart::{build_chart, BrokenLine, CellChart, PointRef};
pub use complex::{Metric, SimplicialComplex};
pub use homology::{homology_groups, HomologyProfile};
pub use spine::{decompose, Decomposition, Strategy};

/// Tolerance for geometric identities (round trips, junctions, seams).
pub const GEOMETRIC_TOL: f64 = 1e-9;
/// Tolerance for simplex membership of barycentric coordinates.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
