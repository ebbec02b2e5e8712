//! Analytic de-chirped signal model for point targets under TDM-MIMO.
//!
//! Sample `i` of chirp `k` at physical receiver `p` is
//!
//! ```text
//! A exp(j2pi (fc tau + S (i/fs) tau - S tau^2 / 2 + q d sin(theta) / lambda) + j k dphi_v)
//! ```
//!
//! with `tau = 2r/c0`, `dphi_v = 4 pi v Tc / lambda` and virtual element
//! `q = tx(k) * num_rx + p`, where `tx(k) = k mod num_tx`.

use std::f64::consts::PI;

use ndarray::Array3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::{RadarConfig, SPEED_OF_LIGHT};
use super::scene::PointTarget;
use crate::error::Result;

/// Additive circularly-symmetric complex Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation of each complex sample (`E|n|^2 = std_dev^2`).
    pub std_dev: f64,
    pub seed: u64,
}

/// Per-frame synthesis state threaded through a sequence.
///
/// The frame index selects an independent noise stream, so frames can be
/// generated in any order (or in parallel) and still be reproducible.
/// Inter-frame carrier phase follows from each frame's target ranges.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChirpPhaseState {
    pub frame_index: u64,
    pub noise: Option<NoiseSpec>,
}

impl ChirpPhaseState {
    pub fn noiseless(frame_index: u64) -> Self {
        Self {
            frame_index,
            noise: None,
        }
    }

    pub fn next(self) -> Self {
        Self {
            frame_index: self.frame_index + 1,
            ..self
        }
    }
}

/// One frame of complex ADC samples, `[sample, chirp, physical rx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFrame {
    pub data: Array3<Complex64>,
    /// Transmitter that fired each chirp.
    pub tx_schedule: Vec<usize>,
}

impl RawFrame {
    pub fn zeros(cfg: &RadarConfig) -> Self {
        Self {
            data: Array3::zeros((cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.num_rx_physical)),
            tx_schedule: tdm_schedule(cfg),
        }
    }

    /// Wraps samples read back from disk; the schedule is the round-robin one.
    pub fn from_samples(cfg: &RadarConfig, data: Array3<Complex64>) -> Result<Self> {
        let expected = (cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.num_rx_physical);
        if data.dim() != expected {
            return Err(crate::Error::shape(format!(
                "raw frame dims {:?}, config expects {expected:?}",
                data.dim()
            )));
        }
        Ok(Self {
            data,
            tx_schedule: tdm_schedule(cfg),
        })
    }
}

/// Round-robin transmitter order: Tx0, Tx1, ..., Tx0, ...
pub fn tdm_schedule(cfg: &RadarConfig) -> Vec<usize> {
    (0..cfg.chirps_per_frame).map(|k| k % cfg.num_tx).collect()
}

/// Noise-free contribution of one target, accumulated into `data`.
fn add_target(cfg: &RadarConfig, target: &PointTarget, data: &mut Array3<Complex64>) {
    let lambda = cfg.wavelength();
    let slope = cfg.sweep_slope;
    let tau = 2.0 * target.range / SPEED_OF_LIGHT;

    let carrier = 2.0 * PI * (cfg.carrier_freq * tau - 0.5 * slope * tau * tau);
    let common = Complex64::from_polar(target.amplitude, carrier);

    let fast_time: Vec<Complex64> = (0..cfg.samples_per_chirp)
        .map(|i| Complex64::from_polar(1.0, 2.0 * PI * slope * (i as f64 / cfg.sampling_freq) * tau))
        .collect();
    let dphi = cfg.doppler_phase_shift(target.radial_velocity);
    let slow_time: Vec<Complex64> = (0..cfg.chirps_per_frame)
        .map(|k| Complex64::from_polar(1.0, k as f64 * dphi))
        .collect();
    let spatial = 2.0 * PI * cfg.spacing() * target.azimuth.sin() / lambda;
    let steering: Vec<Complex64> = (0..cfg.virtual_elements())
        .map(|q| Complex64::from_polar(1.0, q as f64 * spatial))
        .collect();

    let n_rx = cfg.num_rx_physical;
    for (k, &slow) in slow_time.iter().enumerate() {
        let tx = k % cfg.num_tx;
        for p in 0..n_rx {
            let chirp_rx = common * slow * steering[tx * n_rx + p];
            for (i, &fast) in fast_time.iter().enumerate() {
                data[[i, k, p]] += chirp_rx * fast;
            }
        }
    }
}

/// Synthesizes one frame: the sum of every target's de-chirped return plus
/// optional complex Gaussian noise. An empty target list yields pure noise
/// (or zeros without noise).
pub fn synthesize_frame(cfg: &RadarConfig, targets: &[PointTarget], state: ChirpPhaseState) -> Result<RawFrame> {
    cfg.validate()?;
    for t in targets {
        t.validate(cfg)?;
    }
    let mut frame = RawFrame::zeros(cfg);
    for t in targets {
        add_target(cfg, t, &mut frame.data);
    }
    if let Some(noise) = state.noise {
        add_noise(&mut frame.data, noise, state.frame_index);
    }
    Ok(frame)
}

fn add_noise(data: &mut Array3<Complex64>, noise: NoiseSpec, frame_index: u64) {
    if noise.std_dev <= 0.0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    rng.set_stream(frame_index);
    let per_axis = noise.std_dev / 2f64.sqrt();
    for sample in data.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *sample += Complex64::new(re * per_axis, im * per_axis);
    }
}
