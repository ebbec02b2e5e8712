use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use super::stages::{process_frame, range_angle_snapshot, FrameProducts, ProcessingConfig, RvaCube};
use crate::error::{Error, Result};
use crate::radar::{synthesize_frame, ChirpPhaseState, NoiseSpec, RadarConfig, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    /// Complex range-angle map from one TDM cycle.
    RangeAngle,
    /// Power summed over angle.
    RangeVelocity,
    /// Power summed over range.
    VelocityAngle,
}

impl ViewKind {
    pub fn axes(self) -> &'static str {
        match self {
            ViewKind::RangeAngle => "range,angle",
            ViewKind::RangeVelocity => "range,velocity",
            ViewKind::VelocityAngle => "velocity,angle",
        }
    }
}

/// The three heatmaps of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewSet {
    pub frame: usize,
    /// `[range, angle]`, complex.
    pub ra: Array2<Complex64>,
    /// `[range, velocity]`, nonnegative.
    pub rv: Array2<f64>,
    /// `[velocity, angle]`, nonnegative.
    pub va: Array2<f64>,
}

/// `RV[r, v] = sum_a |cube[r, v, a]|^2`.
pub fn range_velocity_power(cube: &RvaCube) -> Array2<f64> {
    cube.data
        .map_axis(Axis(2), |lane| lane.iter().map(|z| z.norm_sqr()).sum())
}

/// `VA[v, a] = sum_r |cube[r, v, a]|^2`.
pub fn velocity_angle_power(cube: &RvaCube) -> Array2<f64> {
    cube.data
        .map_axis(Axis(0), |lane| lane.iter().map(|z| z.norm_sqr()).sum())
}

/// RA, RV and VA views of one processed frame.
pub fn slice_views(
    cfg: &RadarConfig,
    proc: &ProcessingConfig,
    products: &FrameProducts,
    chirp_pick: usize,
    frame: usize,
) -> Result<ViewSet> {
    Ok(ViewSet {
        frame,
        ra: range_angle_snapshot(cfg, proc, products, chirp_pick)?,
        rv: range_velocity_power(&products.cube),
        va: velocity_angle_power(&products.cube),
    })
}

/// Options for turning a scene into a heatmap sequence.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SequenceOptions {
    pub noise: Option<NoiseSpec>,
    pub chirp_pick: usize,
}

/// Synthesizes and processes the first `frames` frames of `scene`. Frames are
/// independent and run in parallel on the current rayon pool.
pub fn process_sequence(
    scene: &Scene,
    cfg: &RadarConfig,
    proc: &ProcessingConfig,
    frames: usize,
    options: SequenceOptions,
) -> Result<Vec<ViewSet>> {
    cfg.validate()?;
    if scene.frame_count() < frames {
        return Err(Error::domain(format!(
            "scene has {} frames, {frames} requested",
            scene.frame_count()
        )));
    }
    scene.frames[..frames]
        .par_iter()
        .enumerate()
        .map(|(t, targets)| {
            let state = ChirpPhaseState {
                frame_index: t as u64,
                noise: options.noise,
            };
            let raw = synthesize_frame(cfg, targets, state)?;
            let products = process_frame(cfg, proc, &raw)?;
            slice_views(cfg, proc, &products, options.chirp_pick, t)
        })
        .collect()
}
