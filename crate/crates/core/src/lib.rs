//! Simulation, theory and cross-validation for the quantum random graph:
//! `n` circles of length `beta`, cut into interval vertices by Poisson holes
//! of intensity `hole_intensity`, joined by pairwise Poisson edge processes
//! of intensity `1/n`.
//!
//! - [`model`]: circle geometry, the overlap kernel and vertex-type measures.
//! - [`sampler`]: seeded graph generation.
//! - [`analysis`]: components, degrees and the two-point statistic.
//! - [`theory`]: closed-form limits and the critical functional.
//! - [`branching`]: the single-type branching process used as an oracle.
//! - [`harness`]: ensembles, sweeps and reports.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod branching;
pub mod error;
pub mod export;
pub mod harness;
pub mod model;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod theory;

pub use analysis::{components, same_component_length_prob, ComponentStats};
pub use error::{QrgError, Result};
pub use model::{arc_intersection_length, MeasureHat, ModelParams, VertexInterval};
pub use sampler::{build_graph, simplify, MultiGraph};
pub use theory::{predictions, TheoryPrediction};
