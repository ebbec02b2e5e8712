//! Spectrum-domain augmentation of complex RVA cubes.
//!
//! Translations act on a per-target slab of range rows (the target's peak
//! row +/- [`SUPPORT_HALF_WIDTH`]) across the full velocity and angle axes.
//! Rows a range translation vacates are reported in a blank mask so that
//! [`interpolate_blanks`] can refill them with background noise.

use std::f64::consts::PI;

use ndarray::{s, Array, Array3, Axis, Dimension, RemoveAxis};
use num_complex::Complex64;
use rand::Rng;

use super::gain::GainProfile;
use crate::error::{Error, Result};
use crate::fft;
use crate::pipeline::RvaCube;
use crate::radar::RadarConfig;

/// Range rows on either side of a target's peak treated as its spectrum.
pub const SUPPORT_HALF_WIDTH: usize = 2;

/// Share of the lowest-magnitude cells used as the background noise pool.
pub const NOISE_POOL_FRACTION: f64 = 0.05;

/// Where a target sits, needed to relocate its spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetLocation {
    pub range: f64,
    pub azimuth: f64,
}

/// A cube with the cells a translation left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub cube: RvaCube,
    pub blank: Array3<bool>,
    /// Target locations after the operation.
    pub targets: Vec<TargetLocation>,
}

impl Augmented {
    pub fn untouched(cube: RvaCube, targets: Vec<TargetLocation>) -> Self {
        let blank = Array3::from_elem(cube.dim(), false);
        Self { cube, blank, targets }
    }
}

/// Reverses the angle axis about its zero-centered bin: index `m` takes the
/// value from `(M - m) mod M`, which keeps boresight (`M / 2`) in place.
pub fn flip_angle_axis<A: Clone, D: Dimension + RemoveAxis>(a: &Array<A, D>, axis: Axis) -> Array<A, D> {
    let len = a.len_of(axis);
    let mut out = a.clone();
    for m in 0..len {
        let src = (len - m) % len;
        out.index_axis_mut(axis, m).assign(&a.index_axis(axis, src));
    }
    out
}

pub fn flip_horizontal(cube: &RvaCube) -> RvaCube {
    RvaCube {
        data: flip_angle_axis(&cube.data, Axis(2)),
    }
}

/// Flip of an augmented cube, its blank mask and its targets.
pub fn flip_augmented(state: &Augmented) -> Augmented {
    Augmented {
        cube: flip_horizontal(&state.cube),
        blank: flip_angle_axis(&state.blank, Axis(2)),
        targets: state
            .targets
            .iter()
            .map(|t| TargetLocation {
                range: t.range,
                azimuth: -t.azimuth,
            })
            .collect(),
    }
}

/// Signed half-away-from-zero rounding; `f64::round` already does this.
fn round_half_away(x: f64) -> i64 {
    x.round() as i64
}

/// Range-cell offset for a range shift: `round(-2 Mr S dr / (c0 fs))`. The
/// new spectrum at row `m` is the old one at row `m + offset`.
pub fn range_shift_cells(cfg: &RadarConfig, delta_r: f64) -> i64 {
    round_half_away(-cfg.range_bin_coord(delta_r))
}

/// Angle-cell offset for moving from `theta` to `theta_new`:
/// `round(M d (sin theta - sin theta_new) / lambda)`.
pub fn angle_shift_cells(cfg: &RadarConfig, theta: f64, theta_new: f64) -> i64 {
    round_half_away(cfg.angle_bin_coord(theta) - cfg.angle_bin_coord(theta_new))
}

/// Slab rows `[lo, hi)` of each target; supports may not overlap.
fn target_slabs(cfg: &RadarConfig, targets: &[TargetLocation]) -> Result<Vec<(usize, usize)>> {
    let mr = cfg.fft_points.range;
    let mut slabs: Vec<(usize, usize)> = targets
        .iter()
        .map(|t| {
            let peak = (cfg.range_bin_coord(t.range).round() as usize).min(mr - 1);
            (
                peak.saturating_sub(SUPPORT_HALF_WIDTH),
                (peak + SUPPORT_HALF_WIDTH + 1).min(mr),
            )
        })
        .collect();
    let mut sorted = slabs.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[1].0 < w[0].1) {
        return Err(Error::domain(
            "targets closer than the spectral support width cannot be translated separately",
        ));
    }
    slabs.shrink_to_fit();
    Ok(slabs)
}

/// Cuts each slab out of the cube, returning the hollowed cube, the mask
/// with the cut rows blanked, and the slab contents with their own mask.
fn cut_slabs(
    cube: &RvaCube,
    blank: &Array3<bool>,
    slabs: &[(usize, usize)],
) -> (RvaCube, Array3<bool>, Vec<(Array3<Complex64>, Array3<bool>)>) {
    let mut out = cube.clone();
    let mut out_blank = blank.clone();
    let mut pieces = Vec::with_capacity(slabs.len());
    for &(lo, hi) in slabs {
        pieces.push((
            cube.data.slice(s![lo..hi, .., ..]).to_owned(),
            blank.slice(s![lo..hi, .., ..]).to_owned(),
        ));
        out.data.slice_mut(s![lo..hi, .., ..]).fill(Complex64::new(0.0, 0.0));
        out_blank.slice_mut(s![lo..hi, .., ..]).fill(true);
    }
    (out, out_blank, pieces)
}

/// Scales the inter-element steering phase of every angle lane of `slab`
/// from `2 pi q d sin(theta) / lambda` by `ratio`.
fn rescale_steering(cfg: &RadarConfig, slab: &mut Array3<Complex64>, azimuth: f64, ratio: f64) {
    let nvirt = cfg.virtual_elements();
    let ma = cfg.fft_points.angle;
    let step = 2.0 * PI * cfg.spacing() * azimuth.sin() / cfg.wavelength();
    let rot: Vec<Complex64> = (0..nvirt)
        .map(|q| Complex64::from_polar(1.0, (ratio - 1.0) * step * q as f64))
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); ma];
    for mut lane in slab.lanes_mut(Axis(2)) {
        for (b, z) in buf.iter_mut().zip(lane.iter()) {
            *b = *z;
        }
        fft::ifftshift(&mut buf);
        fft::inverse_in_place(&mut buf);
        for (q, b) in buf.iter_mut().enumerate() {
            *b /= ma as f64;
            if q < nvirt {
                *b *= rot[q];
            }
        }
        fft::plan(ma, true).process(&mut buf);
        fft::fftshift(&mut buf);
        for (z, b) in lane.iter_mut().zip(&buf) {
            *z = *b;
        }
    }
}

/// Moves every target by `delta_r` in range with its Cartesian `x` fixed.
///
/// Per target: its range slab is shifted by `-range_shift_cells(delta_r)`
/// rows, scaled in amplitude by `(r / (r + dr))^2`, and the steering phase
/// across the virtual array is scaled by `r / (r + dr)`, which moves the
/// azimuth to `asin(r sin(theta) / (r + dr))`. The carrier (Doppler) phase
/// term is left as is.
pub fn translate_range(
    cfg: &RadarConfig,
    cube: &RvaCube,
    delta_r: f64,
    targets: &[TargetLocation],
) -> Result<Augmented> {
    translate_range_augmented(cfg, &Augmented::untouched(cube.clone(), targets.to_vec()), delta_r)
}

/// [`translate_range`] on a cube that may already carry blank cells; the
/// mask travels with the moved slabs.
pub fn translate_range_augmented(cfg: &RadarConfig, state: &Augmented, delta_r: f64) -> Result<Augmented> {
    let (cube, targets) = (&state.cube, &state.targets[..]);
    let r_max = cfg.max_range();
    let mut moved = Vec::with_capacity(targets.len());
    for t in targets {
        let r_new = t.range + delta_r;
        if !(r_new > 0.0 && r_new <= r_max) {
            return Err(Error::domain(format!(
                "range {:.3} m + {delta_r:.3} m leaves (0, {r_max:.3}] m",
                t.range
            )));
        }
        let azimuth = (t.range * t.azimuth.sin() / r_new).asin();
        moved.push(TargetLocation { range: r_new, azimuth });
    }
    if delta_r == 0.0 {
        return Ok(Augmented {
            targets: moved,
            ..state.clone()
        });
    }

    let slabs = target_slabs(cfg, targets)?;
    let (mut out, mut blank, pieces) = cut_slabs(cube, &state.blank, &slabs);
    let offset = -range_shift_cells(cfg, delta_r);
    let mr = cfg.fft_points.range as i64;
    for ((t, &(lo, _)), (mut piece, piece_blank)) in targets.iter().zip(&slabs).zip(pieces) {
        let ratio = t.range / (t.range + delta_r);
        rescale_steering(cfg, &mut piece, t.azimuth, ratio);
        piece.mapv_inplace(|z| z * (ratio * ratio));
        for (i, (row, row_blank)) in piece.outer_iter().zip(piece_blank.outer_iter()).enumerate() {
            let dest = lo as i64 + i as i64 + offset;
            if (0..mr).contains(&dest) {
                out.data.index_axis_mut(Axis(0), dest as usize).assign(&row);
                blank.index_axis_mut(Axis(0), dest as usize).assign(&row_blank);
            }
        }
    }
    Ok(Augmented {
        cube: out,
        blank,
        targets: moved,
    })
}

/// Rotates every target by `delta_theta` about the radar.
///
/// Per target: within its range slab the angle axis is shifted circularly
/// by `-angle_shift_cells(theta, theta + dtheta)` cells and scaled by
/// `G(theta + dtheta) / G(theta)`. The angle spectrum is periodic in its bin
/// index, so nothing is vacated.
pub fn translate_angle(
    cfg: &RadarConfig,
    cube: &RvaCube,
    delta_theta: f64,
    targets: &[TargetLocation],
    gain: &GainProfile,
) -> Result<Augmented> {
    translate_angle_augmented(
        cfg,
        &Augmented::untouched(cube.clone(), targets.to_vec()),
        delta_theta,
        gain,
    )
}

/// [`translate_angle`] on a cube that may already carry blank cells.
pub fn translate_angle_augmented(
    cfg: &RadarConfig,
    state: &Augmented,
    delta_theta: f64,
    gain: &GainProfile,
) -> Result<Augmented> {
    let (cube, targets) = (&state.cube, &state.targets[..]);
    let limit = cfg.max_angle().min(std::f64::consts::FRAC_PI_2);
    let mut moved = Vec::with_capacity(targets.len());
    for t in targets {
        let az = t.azimuth + delta_theta;
        if !(az.abs() < limit) {
            return Err(Error::domain(format!(
                "azimuth {:.2} deg + {:.2} deg leaves the field of view",
                t.azimuth.to_degrees(),
                delta_theta.to_degrees()
            )));
        }
        moved.push(TargetLocation {
            range: t.range,
            azimuth: az,
        });
    }
    if delta_theta == 0.0 {
        return Ok(Augmented {
            targets: moved,
            ..state.clone()
        });
    }

    let slabs = target_slabs(cfg, targets)?;
    let (mut out, mut blank, pieces) = cut_slabs(cube, &state.blank, &slabs);
    let ma = cfg.fft_points.angle as i64;
    for (((t, m), &(lo, _)), (piece, piece_blank)) in targets.iter().zip(&moved).zip(&slabs).zip(pieces) {
        let offset = -angle_shift_cells(cfg, t.azimuth, m.azimuth);
        let scale = gain.gain(m.azimuth) / gain.gain(t.azimuth);
        for (i, plane) in piece.outer_iter().enumerate() {
            let row = lo + i;
            for a in 0..ma {
                // the angle spectrum is periodic in the bin index
                let dest = (a + offset).rem_euclid(ma) as usize;
                out.data
                    .slice_mut(s![row, .., dest])
                    .assign(&plane.column(a as usize).mapv(|z| z * scale));
                blank
                    .slice_mut(s![row, .., dest])
                    .assign(&piece_blank.slice(s![i, .., a as usize]));
            }
        }
    }
    Ok(Augmented {
        cube: out,
        blank,
        targets: moved,
    })
}

/// Fills blank cells with magnitudes drawn (with replacement) from the
/// quietest 5% of the non-blank cells, each with a uniform random phase.
pub fn interpolate_blanks<D: Dimension, R: Rng + ?Sized>(
    data: &Array<Complex64, D>,
    blank: &Array<bool, D>,
    rng: &mut R,
) -> Result<Array<Complex64, D>> {
    if data.shape() != blank.shape() {
        return Err(Error::shape(format!(
            "mask {:?} does not match data {:?}",
            blank.shape(),
            data.shape()
        )));
    }
    if !blank.iter().any(|&b| b) {
        return Ok(data.clone());
    }
    let pool = noise_pool(data, blank)?;
    let mut out = data.clone();
    for (z, &b) in out.iter_mut().zip(blank.iter()) {
        if b {
            let mag = pool[rng.random_range(0..pool.len())];
            *z = Complex64::from_polar(mag, rng.random_range(0.0..2.0 * PI));
        }
    }
    Ok(out)
}

/// Magnitudes of the `floor(5% n)` quietest non-blank cells, ascending.
pub fn noise_pool<D: Dimension>(data: &Array<Complex64, D>, blank: &Array<bool, D>) -> Result<Vec<f64>> {
    let mut mags: Vec<f64> = data
        .iter()
        .zip(blank.iter())
        .filter(|(_, &b)| !b)
        .map(|(z, _)| z.norm())
        .collect();
    let take = (mags.len() as f64 * NOISE_POOL_FRACTION).floor() as usize;
    if take == 0 {
        return Err(Error::domain(format!(
            "{} usable cells are too few for a 5% noise pool",
            mags.len()
        )));
    }
    mags.sort_unstable_by(f64::total_cmp);
    mags.truncate(take);
    Ok(mags)
}

/// Element-wise complex sum of two cubes.
pub fn mix(a: &RvaCube, b: &RvaCube) -> Result<RvaCube> {
    if a.dim() != b.dim() {
        return Err(Error::shape(format!("cannot mix {:?} with {:?}", a.dim(), b.dim())));
    }
    Ok(RvaCube {
        data: &a.data + &b.data,
    })
}
