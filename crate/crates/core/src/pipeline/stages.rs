//! Range FFT -> Velocity FFT -> CFAR -> Doppler compensation -> Angle FFT.

use std::f64::consts::PI;

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cfar::{ca_cfar_2d, CfarDetection, CfarParams};
use crate::error::{Error, Result};
use crate::fft::{self, Window};
use crate::radar::{RadarConfig, RawFrame};

/// Knobs of the preprocessing chain that are not waveform parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ProcessingConfig {
    pub range_window: Window,
    pub velocity_window: Window,
    pub angle_window: Window,
    pub cfar: CfarParams,
}

/// Range FFT output, `[range bin, chirp, physical rx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    pub data: Array3<Complex64>,
    pub tx_schedule: Vec<usize>,
}

/// Velocity FFT output over the virtual array, `[range, velocity, virtual
/// element]`, zero velocity at index `Mv / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RvSpectrum {
    pub data: Array3<Complex64>,
}

/// Range-velocity-angle cube, `[range, velocity, angle]`, velocity and angle
/// zero-centered.
#[derive(Debug, Clone, PartialEq)]
pub struct RvaCube {
    pub data: Array3<Complex64>,
}

impl RvaCube {
    pub fn zeros(cfg: &RadarConfig) -> Self {
        let p = cfg.fft_points;
        Self {
            data: Array3::zeros((p.range, p.velocity, p.angle)),
        }
    }

    pub fn dim(&self) -> (usize, usize, usize) {
        self.data.dim()
    }

    pub fn total_power(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Index and magnitude of the strongest cell.
    pub fn argmax(&self) -> ((usize, usize, usize), f64) {
        let mut best = ((0, 0, 0), f64::NEG_INFINITY);
        for (idx, z) in self.data.indexed_iter() {
            let m = z.norm_sqr();
            if m > best.1 {
                best = (idx, m);
            }
        }
        (best.0, best.1.sqrt())
    }
}

pub fn range_fft(cfg: &RadarConfig, frame: &RawFrame, window: Window) -> RangeProfile {
    let (ns, nc, nrx) = frame.data.dim();
    let mr = cfg.fft_points.range;
    let taper = window.coefficients(ns);
    let used = ns.min(mr);
    // transform chirp-major lanes in one batch, then lay them out range-major
    let mut lanes = Vec::with_capacity(nc * nrx * mr);
    for k in 0..nc {
        for p in 0..nrx {
            lanes.extend((0..used).map(|i| frame.data[[i, k, p]] * taper[i]));
            lanes.resize(lanes.len() + mr - used, Complex64::new(0.0, 0.0));
        }
    }
    if !lanes.is_empty() {
        fft::plan(mr, true).process(&mut lanes);
    }
    let lanes = Array3::from_shape_vec((nc, nrx, mr), lanes).expect("length matches shape");
    let data = lanes.permuted_axes([2, 0, 1]).as_standard_layout().into_owned();
    RangeProfile {
        data,
        tx_schedule: frame.tx_schedule.clone(),
    }
}

/// Chirp indices fired by each transmitter, complete TDM cycles only.
fn per_tx_chirps(cfg: &RadarConfig, schedule: &[usize]) -> Result<Vec<Vec<usize>>> {
    let cycles = schedule.len() / cfg.num_tx;
    let mut chirps = vec![Vec::with_capacity(cycles); cfg.num_tx];
    for cycle in 0..cycles {
        for tx in 0..cfg.num_tx {
            let k = cycle * cfg.num_tx + tx;
            if schedule[k] != tx {
                return Err(Error::config(format!(
                    "chirp {k} fired by Tx{} breaks the round-robin schedule",
                    schedule[k]
                )));
            }
            chirps[tx].push(k);
        }
    }
    Ok(chirps)
}

/// De-interleaves the per-Tx chirp streams into virtual elements
/// `q = tx * num_rx + rx` and transforms across chirps. Streams longer than
/// the FFT are truncated, shorter ones zero-padded.
pub fn velocity_fft(cfg: &RadarConfig, profile: &RangeProfile, window: Window) -> Result<RvSpectrum> {
    let (mr, _, nrx) = profile.data.dim();
    let mv = cfg.fft_points.velocity;
    let streams = per_tx_chirps(cfg, &profile.tx_schedule)?;
    let used = streams[0].len().min(mv);
    let taper = window.coefficients(used);
    let mut data = Array3::zeros((mr, mv, cfg.num_tx * nrx));
    let mut slow = vec![Complex64::new(0.0, 0.0); used];
    let mut spectrum = vec![Complex64::new(0.0, 0.0); mv];
    for m in 0..mr {
        for (tx, chirps) in streams.iter().enumerate() {
            for p in 0..nrx {
                for (s, &k) in slow.iter_mut().zip(chirps) {
                    *s = profile.data[[m, k, p]];
                }
                fft::forward_padded(&slow, &taper, &mut spectrum);
                fft::fftshift(&mut spectrum);
                let q = tx * nrx + p;
                for (v, &z) in spectrum.iter().enumerate() {
                    data[[m, v, q]] = z;
                }
            }
        }
    }
    Ok(RvSpectrum { data })
}

/// Non-coherent power over the virtual array, `[range, velocity]`.
pub fn rv_power(spectrum: &RvSpectrum) -> Array2<f64> {
    spectrum
        .data
        .map_axis(Axis(2), |lane| lane.iter().map(|z| z.norm_sqr()).sum())
}

/// Phase by which the Doppler index advances across one TDM cycle,
/// `2 pi (index - Mv/2) / Mv`.
fn cycle_phase(cfg: &RadarConfig, velocity_index: usize) -> f64 {
    let mv = cfg.fft_points.velocity;
    2.0 * PI * (velocity_index as f64 - (mv / 2) as f64) / mv as f64
}

/// Rotation undoing the Doppler phase picked up by transmitter `tx`, which
/// fires `tx` chirps after Tx0 within a cycle: a `tx / num_tx` share of the
/// per-cycle phase (half of it for the second of two transmitters).
fn compensation(cfg: &RadarConfig, velocity_index: usize, tx: usize) -> Complex64 {
    let share = tx as f64 / cfg.num_tx as f64;
    Complex64::from_polar(1.0, -share * cycle_phase(cfg, velocity_index))
}

/// Rotates the later-transmitter virtual elements at every detected cell.
/// Cells without a detection are returned untouched.
pub fn doppler_compensate(cfg: &RadarConfig, spectrum: &RvSpectrum, detections: &[CfarDetection]) -> RvSpectrum {
    let mut out = spectrum.clone();
    let nrx = cfg.num_rx_physical;
    let mut seen = std::collections::HashSet::new();
    for det in detections {
        if !seen.insert((det.range_bin, det.velocity_bin)) {
            continue;
        }
        for tx in 1..cfg.num_tx {
            let rot = compensation(cfg, det.velocity_bin, tx);
            for p in 0..nrx {
                out.data[[det.range_bin, det.velocity_bin, tx * nrx + p]] *= rot;
            }
        }
    }
    out
}

/// Transforms across the virtual array at every range-velocity cell.
pub fn angle_fft(cfg: &RadarConfig, spectrum: &RvSpectrum, window: Window) -> RvaCube {
    let (mr, mv, nvirt) = spectrum.data.dim();
    let ma = cfg.fft_points.angle;
    let taper = window.coefficients(nvirt);
    let used = nvirt.min(ma);
    // one write pass: windowed elements then zero padding, lane by lane
    let mut flat = Vec::with_capacity(mr * mv * ma);
    for src in spectrum.data.lanes(Axis(2)) {
        flat.extend((0..used).map(|q| src[q] * taper[q]));
        flat.resize(flat.len() + ma - used, Complex64::new(0.0, 0.0));
    }
    if !flat.is_empty() {
        // every lane is contiguous, so one batched call covers the cube
        fft::plan(ma, true).process(&mut flat);
        for lane in flat.chunks_exact_mut(ma) {
            fft::fftshift(lane);
        }
    }
    let data = Array3::from_shape_vec((mr, mv, ma), flat).expect("length matches shape");
    RvaCube { data }
}

/// Every intermediate product of one frame.
#[derive(Debug, Clone)]
pub struct FrameProducts {
    pub profile: RangeProfile,
    pub spectrum: RvSpectrum,
    pub detections: Vec<CfarDetection>,
    pub cube: RvaCube,
}

/// Full chain for one frame.
pub fn process_frame(cfg: &RadarConfig, proc: &ProcessingConfig, frame: &RawFrame) -> Result<FrameProducts> {
    cfg.validate()?;
    let profile = range_fft(cfg, frame, proc.range_window);
    let raw_spectrum = velocity_fft(cfg, &profile, proc.velocity_window)?;
    let detections = ca_cfar_2d(rv_power(&raw_spectrum).view(), &proc.cfar)?;
    let spectrum = doppler_compensate(cfg, &raw_spectrum, &detections);
    let cube = angle_fft(cfg, &spectrum, proc.angle_window);
    Ok(FrameProducts {
        profile,
        spectrum,
        detections,
        cube,
    })
}

/// Compensation rotation for the RA snapshot at a range bin: the strongest
/// detection's velocity index, if any detection falls in that bin.
pub(crate) fn strongest_velocity_per_range(detections: &[CfarDetection], range_bins: usize) -> Vec<Option<usize>> {
    let mut best: Vec<Option<(f64, usize)>> = vec![None; range_bins];
    for d in detections {
        let slot = &mut best[d.range_bin];
        if slot.is_none_or(|(m, _)| d.magnitude > m) {
            *slot = Some((d.magnitude, d.velocity_bin));
        }
    }
    best.into_iter().map(|b| b.map(|(_, v)| v)).collect()
}

/// Complex range-angle map from a single TDM cycle (`chirp_pick`).
pub fn range_angle_snapshot(
    cfg: &RadarConfig,
    proc: &ProcessingConfig,
    products: &FrameProducts,
    chirp_pick: usize,
) -> Result<Array2<Complex64>> {
    let streams = per_tx_chirps(cfg, &products.profile.tx_schedule)?;
    let cycles = streams[0].len();
    if chirp_pick >= cycles {
        return Err(Error::domain(format!(
            "chirp_pick {chirp_pick} out of range, frame has {cycles} TDM cycles"
        )));
    }
    let (mr, _, nrx) = products.profile.data.dim();
    let ma = cfg.fft_points.angle;
    let nvirt = cfg.num_tx * nrx;
    let taper = proc.angle_window.coefficients(nvirt);
    let doppler = strongest_velocity_per_range(&products.detections, mr);

    let mut ra = Array2::zeros((mr, ma));
    let mut elements = vec![Complex64::new(0.0, 0.0); nvirt];
    let mut out = vec![Complex64::new(0.0, 0.0); ma];
    for m in 0..mr {
        for (tx, chirps) in streams.iter().enumerate() {
            let rot = match doppler[m] {
                Some(v) if tx > 0 => compensation(cfg, v, tx),
                _ => Complex64::new(1.0, 0.0),
            };
            for p in 0..nrx {
                elements[tx * nrx + p] = products.profile.data[[m, chirps[chirp_pick], p]] * rot;
            }
        }
        fft::forward_padded(&elements, &taper, &mut out);
        fft::fftshift(&mut out);
        for (a, &z) in out.iter().enumerate() {
            ra[[m, a]] = z;
        }
    }
    Ok(ra)
}
