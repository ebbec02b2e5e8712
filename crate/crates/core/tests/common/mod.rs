#![allow(dead_code)]

use std::f64::consts::PI;

use ndarray::Array3;
use num_complex::Complex64;
use radcube::pipeline::{process_frame, FrameProducts, ProcessingConfig, RvaCube};
use radcube::radar::{synthesize_frame, ChirpPhaseState, FftPoints, ObjectClass, PointTarget, RadarConfig, Scene};
use rand::Rng;

/// Direct O(N^2) DFT of `input * taper`, zero-padded to `n`. With `centered`
/// the output index `k` holds frequency `k - n/2`.
pub fn dft(input: &[Complex64], taper: &[f64], n: usize, centered: bool) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let f = if centered { k as f64 - (n / 2) as f64 } else { k as f64 };
            input
                .iter()
                .zip(taper)
                .enumerate()
                .map(|(i, (x, w))| x * *w * Complex64::from_polar(1.0, -2.0 * PI * f * i as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// `max |a - b| / max |b|`.
pub fn rel_err<'a>(a: impl IntoIterator<Item = &'a Complex64>, b: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for (x, y) in a.into_iter().zip(b) {
        diff = diff.max((x - y).norm());
        scale = scale.max(y.norm());
    }
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_array3<R: Rng>(rng: &mut R, dims: (usize, usize, usize)) -> Array3<Complex64> {
    Array3::from_shape_fn(dims, |_| random_complex(rng))
}

/// A reduced waveform for fast tests: 64 samples, 32 chirps, same RF.
pub fn small_config() -> RadarConfig {
    let mut cfg = RadarConfig::awr1843();
    cfg.samples_per_chirp = 64;
    cfg.chirps_per_frame = 32;
    cfg.fft_points = FftPoints {
        range: 64,
        velocity: 16,
        angle: 32,
    };
    cfg
}

/// Uniformly drawn target well inside the unambiguous envelope.
pub fn random_target<R: Rng>(rng: &mut R, cfg: &RadarConfig) -> PointTarget {
    let class = ObjectClass::ALL[rng.random_range(0..3)];
    PointTarget::new(
        rng.random_range(1.0..0.9 * cfg.max_range()),
        rng.random_range(-60.0f64..60.0).to_radians(),
        rng.random_range(-0.9..0.9) * cfg.tdm_max_velocity(),
        rng.random_range(0.5..2.0),
        class,
    )
}

pub fn process(cfg: &RadarConfig, targets: &[PointTarget]) -> FrameProducts {
    let raw = synthesize_frame(cfg, targets, ChirpPhaseState::noiseless(0)).unwrap();
    process_frame(cfg, &ProcessingConfig::default(), &raw).unwrap()
}

/// Circular distance between two indices on an axis of length `len`.
pub fn circ_dist(a: usize, b: usize, len: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(len - d)
}

/// Zero-centered index where the cube should peak for `t`: nearest bins
/// on all three axes.
pub fn expected_peak(cfg: &RadarConfig, t: &PointTarget) -> (usize, usize, usize) {
    let r = cfg.range_bin_coord(t.range).round() as usize;
    let v = cfg.velocity_index_of(t.radial_velocity);
    let a = cfg.angle_index(cfg.angle_bin_coord(t.azimuth).round() as i64);
    (r, v, a)
}

/// Strongest cell among range rows `rows`.
pub fn peak_in_rows(cube: &RvaCube, rows: std::ops::RangeInclusive<usize>) -> ((usize, usize, usize), f64) {
    let mut best = ((0, 0, 0), f64::NEG_INFINITY);
    for ((r, v, a), z) in cube.data.indexed_iter() {
        if rows.contains(&r) && z.norm() > best.1 {
            best = ((r, v, a), z.norm());
        }
    }
    best
}

/// The moved target's support is the direct synthesis' peak row +/- 2.
/// Rows outside it still hold the source cube's residual sidelobes.
/// `None` when the peak cell matches exactly and the magnitude within 2%.
pub fn resynthesis_mismatch(augmented: &RvaCube, direct: &RvaCube) -> Option<String> {
    let (pd, md) = direct.argmax();
    let half = radcube::augment::SUPPORT_HALF_WIDTH;
    let (pa, ma) = peak_in_rows(augmented, pd.0.saturating_sub(half)..=pd.0 + half);
    if pa != pd {
        return Some(format!("peak {pa:?}, direct synthesis {pd:?}"));
    }
    if (ma / md - 1.0).abs() >= 0.02 {
        return Some(format!("magnitude {ma} vs {md}"));
    }
    None
}

/// Target plus a whole-bin range offset that keeps it, and its rotated
/// azimuth, inside the envelope.
pub fn range_trial<R: Rng>(rng: &mut R, cfg: &RadarConfig) -> (PointTarget, f64, PointTarget) {
    let w = cfg.range_bin_width();
    loop {
        let t = random_target(rng, cfg);
        let k = rng.random_range(-40i64..=40);
        let r_new = t.range + k as f64 * w;
        if k == 0 || !(1.0..0.9 * cfg.max_range()).contains(&r_new) {
            continue;
        }
        let s = t.range * t.azimuth.sin() / r_new;
        if s.abs() > 70f64.to_radians().sin() {
            continue;
        }
        let scale = (t.range / r_new).powi(2);
        let moved = PointTarget::new(r_new, s.asin(), t.radial_velocity, t.amplitude * scale, t.class);
        return (t, k as f64 * w, moved);
    }
}

/// Target plus an azimuth change worth a whole number of angle bins.
pub fn angle_trial<R: Rng>(rng: &mut R, cfg: &RadarConfig) -> (PointTarget, f64, PointTarget) {
    let per_bin = cfg.wavelength() / (cfg.fft_points.angle as f64 * cfg.spacing());
    loop {
        let t = random_target(rng, cfg);
        let k = rng.random_range(-50i64..=50);
        let s = t.azimuth.sin() + k as f64 * per_bin;
        if k == 0 || s.abs() > 70f64.to_radians().sin() {
            continue;
        }
        let moved = PointTarget::new(t.range, s.asin(), t.radial_velocity, t.amplitude, t.class);
        return (t, s.asin() - t.azimuth, moved);
    }
}

/// Multi-frame scene whose same-class centers never touch on the grid.
pub fn random_scene<R: Rng>(rng: &mut R, cfg: &RadarConfig, frames: usize) -> Scene {
    let mut out = Vec::new();
    for _ in 0..frames {
        let mut targets = Vec::new();
        let mut cells: Vec<(usize, usize, ObjectClass)> = Vec::new();
        for _ in 0..rng.random_range(0..5) {
            let t = random_target(rng, cfg);
            let r = cfg.range_bin_of(t.range).unwrap();
            let a = cfg.angle_index(cfg.angle_bin_of(t.azimuth).unwrap());
            if cells
                .iter()
                .any(|&(cr, ca, cc)| cc == t.class && cr.abs_diff(r) <= 1 && ca.abs_diff(a) <= 1)
            {
                continue;
            }
            cells.push((r, a, t.class));
            targets.push(t);
        }
        out.push(targets);
    }
    Scene::new(out)
}
