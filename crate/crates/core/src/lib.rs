//! Deterministic FMCW radar-cube toolkit.
//!
//! * [`radar`]: waveform configuration, resolution formulas, bin mappings and
//!   the analytic point-target synthesizer.
//! * [`pipeline`]: Range/Velocity/Angle FFTs, CA-CFAR and TDM Doppler
//!   compensation, producing RVA cubes and RA/RV/VA views.
//! * [`augment`]: radar-aware flipping, translating, interpolating and mixing.
//! * [`fusion`]: feature fusion, Gaussian center-point labels and focal loss.
//! * [`eval`]: peak extraction, matching and precision/recall.
//! * [`complexity`]: FLOPs and memory of convolutional layer stacks.
//! * [`rcube`], [`render`]: binary tensor container and PPM heatmaps.

pub mod augment;
pub mod complexity;
mod error;
pub mod eval;
pub mod fft;
pub mod fusion;
pub mod pipeline;
pub mod radar;
pub mod rcube;
pub mod render;

pub use error::{Error, Result};
