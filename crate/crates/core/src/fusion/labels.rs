use ndarray::{Array4, Axis};

use crate::error::{Error, Result};
use crate::radar::{ObjectClass, RadarConfig, Scene};

/// Default Gaussian spread per class, in bins.
pub fn default_sigma(class: ObjectClass) -> f64 {
    match class {
        ObjectClass::Pedestrian => 2.0,
        ObjectClass::Cyclist => 3.0,
        ObjectClass::Car => 5.0,
    }
}

/// A ground-truth object center on the range-angle grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Center {
    pub frame: usize,
    pub range_bin: usize,
    pub angle_bin: usize,
    pub class: ObjectClass,
    /// Gaussian standard deviation (bins).
    pub sigma: f64,
}

impl Center {
    pub fn new(frame: usize, range_bin: usize, angle_bin: usize, class: ObjectClass) -> Self {
        Self {
            frame,
            range_bin,
            angle_bin,
            class,
            sigma: default_sigma(class),
        }
    }
}

/// Center-point heatmaps `Y in [0, 1]^{D x W x H x C}`: time, range, angle,
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    pub data: Array4<f64>,
}

impl LabelMap {
    pub fn zeros(frames: usize, range_bins: usize, angle_bins: usize) -> Self {
        Self {
            data: Array4::zeros((frames, range_bins, angle_bins, ObjectClass::ALL.len())),
        }
    }

    /// Cells equal to exactly 1, i.e. splatted centers.
    pub fn object_count(&self) -> usize {
        self.data.iter().filter(|&&y| y == 1.0).count()
    }

    pub fn frames(&self) -> usize {
        self.data.len_of(Axis(0))
    }
}

/// Splats a Gaussian `exp(-((r - p_r)^2 + (a - p_a)^2) / (2 sigma^2))` for
/// each center into its class/frame plane, merging overlaps with `max`.
/// Distances are measured in bins on both axes.
pub fn rasterize_labels(frames: usize, range_bins: usize, angle_bins: usize, centers: &[Center]) -> Result<LabelMap> {
    let mut labels = LabelMap::zeros(frames, range_bins, angle_bins);
    for c in centers {
        if c.frame >= frames || c.range_bin >= range_bins || c.angle_bin >= angle_bins {
            return Err(Error::domain(format!(
                "center ({}, {}, {}) off the {frames}x{range_bins}x{angle_bins} grid",
                c.frame, c.range_bin, c.angle_bin
            )));
        }
        if !(c.sigma > 0.0 && c.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be > 0, got {}", c.sigma)));
        }
        let denom = 2.0 * c.sigma * c.sigma;
        let mut plane = labels
            .data
            .index_axis_mut(Axis(0), c.frame)
            .into_shape_with_order((range_bins, angle_bins, ObjectClass::ALL.len()))
            .expect("contiguous label plane");
        for r in 0..range_bins {
            let dr = r as f64 - c.range_bin as f64;
            for a in 0..angle_bins {
                let da = a as f64 - c.angle_bin as f64;
                let y = (-(dr * dr + da * da) / denom).exp();
                let cell = &mut plane[[r, a, c.class.index()]];
                if y > *cell {
                    *cell = y;
                }
            }
        }
    }
    Ok(labels)
}

/// Ground-truth centers of every target in `scene`: range bin from
/// `range_bin_of`, angle index from `angle_bin_of` on the zero-centered axis.
pub fn centers_from_scene(cfg: &RadarConfig, scene: &Scene) -> Result<Vec<Center>> {
    let mut centers = Vec::new();
    for (t, frame) in scene.frames.iter().enumerate() {
        for target in frame {
            let range_bin = cfg.range_bin_of(target.range)?;
            let angle_bin = cfg.angle_index(cfg.angle_bin_of(target.azimuth)?);
            centers.push(Center::new(t, range_bin, angle_bin, target.class));
        }
    }
    Ok(centers)
}
