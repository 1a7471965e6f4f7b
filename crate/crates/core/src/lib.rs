//! Discriminator-guided adaptive diffusion for test-time adaptation of
//! corrupted images.
//!
//! A corrupted input is forward-diffused step by step while a frozen domain
//! discriminator watches for residual target-domain cues; diffusion halts at
//! the first step whose confidence drops below a threshold, the reverse
//! process reconstructs a source-aligned image (optionally with low-pass
//! structural guidance), and a frozen source classifier predicts the label.
//!
//! Modules follow the pipeline:
//!
//! - [`data`]: synthetic shape dataset, value-space handling, PGM/IDX I/O
//! - [`corruptions`]: desk-scale corruption families (noise, blur, weather, digital)
//! - [`schedule`]: noise schedule construction and rescaling
//! - [`diffusion`]: forward/reverse kernels and unconditional sampling
//! - [`guidance`]: low-pass structural guidance energy and gradient
//! - [`models`]: denoiser / discriminator / classifier plus training and checkpoints
//! - [`adapt`]: the adaptive test-time pipeline
//! - [`eval`]: benchmark tables, F1 curves, stopping histograms, CSV/SVG export
//!
//! With the default `parallel` feature, per-sample work (batch adaptation,
//! dataset corruption, benchmark cells) runs on rayon; disabling it yields a
//! bit-identical sequential build.

pub mod adapt;
pub mod corruptions;
pub mod data;
pub mod diffusion;
mod error;
pub mod eval;
pub mod guidance;
pub mod models;
pub mod nn;
pub mod par;
pub mod rng;
pub mod schedule;

pub use error::{Error, Result};
