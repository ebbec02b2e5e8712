//! Radar configuration, scene description and analytic signal synthesis.

mod config;
mod scene;
mod synth;

pub use config::{centered_index, FftPoints, RadarConfig, SPEED_OF_LIGHT};
pub use scene::{ObjectClass, PointTarget, Scene};
pub use synth::{synthesize_frame, tdm_schedule, ChirpPhaseState, NoiseSpec, RawFrame};
