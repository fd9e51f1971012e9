//! Target-size JPEG compression by searching quantisation tables and quality
//! factor with population-based metaheuristics.
//!
//! The transform and search code is generic over the floating-point scalar
//! ([`Real`]: `f32` or `f64`); the aliases below fix it to `f64`.

pub mod candidate;
pub mod error;
pub mod image;
pub mod jpeg;
pub mod metrics;
pub mod optim;
pub mod scalar;
pub mod stats;

pub use candidate::{Bounds, Candidate, Evaluation, JpegObjective, ObjectiveSpec};
pub use error::{DecodeError, DecodeErrorKind, Error, Result};
pub use image::PixelImage;
pub use optim::{make_optimizer, AlgorithmId, OptimizerConfig, Problem, RunResult};
pub use scalar::Real;

pub type CoeffBlock = jpeg::Block<f64>;
pub type DctPlan = jpeg::DctPlan<f64>;
pub type Optimizer = optim::Optimizer<f64>;
