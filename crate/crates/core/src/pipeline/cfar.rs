//! Two-dimensional cell-averaging CFAR over a range-velocity power map.
//!
//! The training ring is the `(guard + training)` box minus the guard box.
//! The velocity axis wraps (Doppler is periodic); the range axis is clipped
//! at the edges, with the scale factor recomputed for the reduced ring.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CfarParams {
    /// Guard half-widths `[range, velocity]`.
    pub guard: [usize; 2],
    /// Training depths `[range, velocity]` beyond the guard cells.
    pub training: [usize; 2],
    /// Design false-alarm probability for exponential (square-law) noise.
    pub pfa: f64,
    /// Keep only cells that are local maxima of their 3x3 neighbourhood.
    pub peaks_only: bool,
    /// Strongest detections kept per frame.
    pub max_detections: usize,
}

impl Default for CfarParams {
    fn default() -> Self {
        Self {
            guard: [2, 2],
            training: [8, 8],
            pfa: 1e-3,
            peaks_only: true,
            max_detections: 64,
        }
    }
}

impl CfarParams {
    /// CA-CFAR multiplier on the mean training power for `cells` training cells.
    pub fn scale_factor(&self, cells: usize) -> f64 {
        let n = cells as f64;
        n * (self.pfa.powf(-1.0 / n) - 1.0)
    }

    fn validate(&self, shape: (usize, usize)) -> Result<()> {
        if !(self.pfa > 0.0 && self.pfa < 1.0) {
            return Err(Error::config(format!("cfar pfa must be in (0, 1), got {}", self.pfa)));
        }
        if self.training[0] + self.training[1] == 0 {
            return Err(Error::config("cfar needs at least one training cell"));
        }
        for (axis, len) in [shape.0, shape.1].into_iter().enumerate() {
            let span = 2 * (self.guard[axis] + self.training[axis]) + 1;
            if len < span {
                return Err(Error::config(format!(
                    "spectrum axis {axis} has {len} cells, cfar window needs {span}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarDetection {
    pub range_bin: usize,
    pub velocity_bin: usize,
    /// Power of the cell under test.
    pub magnitude: f64,
    /// Mean power over the training ring.
    pub noise_level: f64,
}

/// Summed-area table with the velocity axis padded circularly by `pad`.
struct BoxSums {
    table: Array2<f64>,
    pad: usize,
    rows: usize,
}

impl BoxSums {
    fn new(power: ArrayView2<f64>, pad: usize) -> Self {
        let (rows, cols) = power.dim();
        let mut table = Array2::zeros((rows + 1, cols + 2 * pad + 1));
        for r in 0..rows {
            let mut run = 0.0;
            for c in 0..cols + 2 * pad {
                let src = (c + cols - pad % cols) % cols;
                run += power[[r, src]];
                table[[r + 1, c + 1]] = table[[r, c + 1]] + run;
            }
        }
        Self { table, pad, rows }
    }

    /// Sum and count over rows `[r - hr, r + hr]` (clipped) and columns
    /// `[v - hv, v + hv]` (wrapped).
    fn sum(&self, r: usize, v: usize, hr: usize, hv: usize) -> (f64, usize) {
        let r0 = r.saturating_sub(hr);
        let r1 = (r + hr + 1).min(self.rows);
        let c0 = v + self.pad - hv;
        let c1 = v + self.pad + hv + 1;
        let t = &self.table;
        let s = t[[r1, c1]] - t[[r0, c1]] - t[[r1, c0]] + t[[r0, c0]];
        (s, (r1 - r0) * (c1 - c0))
    }
}

fn is_local_peak(power: ArrayView2<f64>, r: usize, v: usize) -> bool {
    let (rows, cols) = power.dim();
    let value = power[[r, v]];
    for dr in -1i64..=1 {
        let rr = r as i64 + dr;
        if rr < 0 || rr >= rows as i64 {
            continue;
        }
        for dv in -1i64..=1 {
            if dr == 0 && dv == 0 {
                continue;
            }
            let vv = (v as i64 + dv).rem_euclid(cols as i64) as usize;
            let other = power[[rr as usize, vv]];
            // plateaus resolve to their first cell in scan order
            let earlier = dr < 0 || (dr == 0 && dv < 0);
            if other > value || (earlier && other == value) {
                return false;
            }
        }
    }
    true
}

/// Runs CA-CFAR over a nonnegative `[range, velocity]` power map. Returns
/// detections sorted by power, strongest first, capped at `max_detections`.
pub fn ca_cfar_2d(power: ArrayView2<f64>, params: &CfarParams) -> Result<Vec<CfarDetection>> {
    params.validate(power.dim())?;
    if power.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::domain("cfar input must be nonnegative"));
    }
    let (rows, cols) = power.dim();
    let [gr, gv] = params.guard;
    let outer = [gr + params.training[0], gv + params.training[1]];
    let sums = BoxSums::new(power, outer[1]);

    let mut detections = Vec::new();
    for r in 0..rows {
        for v in 0..cols {
            let (outer_sum, outer_n) = sums.sum(r, v, outer[0], outer[1]);
            let (inner_sum, inner_n) = sums.sum(r, v, gr, gv);
            let cells = outer_n - inner_n;
            if cells == 0 {
                continue;
            }
            let noise = ((outer_sum - inner_sum) / cells as f64).max(0.0);
            let value = power[[r, v]];
            if value <= params.scale_factor(cells) * noise {
                continue;
            }
            if params.peaks_only && !is_local_peak(power, r, v) {
                continue;
            }
            detections.push(CfarDetection {
                range_bin: r,
                velocity_bin: v,
                magnitude: value,
                noise_level: noise,
            });
        }
    }
    detections.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then((a.range_bin, a.velocity_bin).cmp(&(b.range_bin, b.velocity_bin)))
    });
    detections.truncate(params.max_detections);
    Ok(detections)
}
