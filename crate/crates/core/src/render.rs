//! Heatmap rendering to binary PPM (P6).

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colormap {
    Gray,
    #[default]
    Jet,
}

impl std::str::FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grey" => Ok(Self::Gray),
            "jet" => Ok(Self::Jet),
            _ => Err(Error::config(format!("unknown colormap {s:?}"))),
        }
    }
}

impl Colormap {
    /// `t` in `[0, 1]`.
    pub fn rgb(self, t: f64) -> [u8; 3] {
        let t = t.clamp(0.0, 1.0);
        let byte = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
        match self {
            Colormap::Gray => [byte(t); 3],
            Colormap::Jet => {
                let ch = |center: f64| byte(1.5 - (4.0 * t - center).abs());
                [ch(3.0), ch(2.0), ch(1.0)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub colormap: Colormap,
    /// Dynamic range below the peak, in dB; lower values clip to the floor.
    pub floor_db: f64,
    /// Input holds power (`10 log10`) rather than magnitude (`20 log10`).
    pub power: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            colormap: Colormap::Jet,
            floor_db: 40.0,
            power: false,
        }
    }
}

/// Maps each cell to `[0, 1]`: 1 at the peak, 0 at `floor_db` below it or
/// lower. A map with no positive cell renders as all zeros.
pub fn normalized_db(values: ArrayView2<f64>, opts: &RenderOptions) -> Result<ndarray::Array2<f64>> {
    if !(opts.floor_db > 0.0 && opts.floor_db.is_finite()) {
        return Err(Error::config(format!("dB floor must be > 0, got {}", opts.floor_db)));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("heatmap holds non-finite values"));
    }
    let scale = if opts.power { 10.0 } else { 20.0 };
    let peak = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return Ok(ndarray::Array2::zeros(values.dim()));
    }
    Ok(values.map(|x| {
        let db = if *x == 0.0 {
            f64::NEG_INFINITY
        } else {
            scale * (x.abs() / peak).log10()
        };
        ((db + opts.floor_db) / opts.floor_db).clamp(0.0, 1.0)
    }))
}

/// P6 image of a `[row, col]` map: width = columns, and the last row is
/// drawn at the top so the first axis grows upward.
pub fn render_ppm(values: ArrayView2<f64>, opts: &RenderOptions) -> Result<Vec<u8>> {
    let (rows, cols) = values.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::shape("cannot render an empty map"));
    }
    let level = normalized_db(values, opts)?;
    let mut out = format!("P6\n{cols} {rows}\n255\n").into_bytes();
    out.reserve(rows * cols * 3);
    for r in (0..rows).rev() {
        for c in 0..cols {
            out.extend_from_slice(&opts.colormap.rgb(level[[r, c]]));
        }
    }
    Ok(out)
}
