use ndarray::{ArrayView4, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Predictions are clamped to `[EPS, 1 - EPS]` before taking logs.
pub const EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LossParams {
    pub alpha: f64,
    pub beta: f64,
    /// Weight of positive cells and of cells where another class is present.
    pub kappa: f64,
    /// Weight of the RA-dropped auxiliary term.
    pub gamma: f64,
    /// Number of objects; normalization uses `max(n_obj, 1)`.
    pub n_obj: usize,
}

impl Default for LossParams {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 4.0,
            kappa: 4.0,
            gamma: 0.5,
            n_obj: 1,
        }
    }
}

impl LossParams {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.alpha) || !ok(self.beta) || !ok(self.gamma) {
            return Err(Error::config("alpha, beta and gamma must be finite and >= 0"));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::config("kappa must be finite and > 0"));
        }
        Ok(())
    }

    pub fn with_n_obj(self, n_obj: usize) -> Self {
        Self { n_obj, ..self }
    }
}

/// Penalty-reduced pixelwise logistic loss over `[time, range, angle, class]`
/// heatmaps.
///
/// Per cell: `Y = 1` contributes `kappa (1-p)^alpha log p`; `Y < 1` contributes
/// `w (1-Y)^beta p^alpha log(1-p)` with `w = kappa` when any other class is
/// positive at the same `(t, r, theta)` and `w = 1` otherwise. The sum is
/// negated and divided by `max(n_obj, 1)`.
pub fn focal_loss(pred: ArrayView4<f64>, truth: ArrayView4<f64>, params: &LossParams) -> Result<f64> {
    params.validate()?;
    if pred.dim() != truth.dim() {
        return Err(Error::shape(format!(
            "prediction {:?} and truth {:?} differ in shape",
            pred.dim(),
            truth.dim()
        )));
    }
    let classes = pred.len_of(Axis(3));
    let mut total = 0.0;
    for (p_cell, y_cell) in pred.lanes(Axis(3)).into_iter().zip(truth.lanes(Axis(3))) {
        for c in 0..classes {
            let y = y_cell[c];
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::domain(format!("label value {y} outside [0, 1]")));
            }
            let p = p_cell[c];
            if p.is_nan() {
                return Err(Error::domain("prediction is NaN"));
            }
            let p = p.clamp(EPS, 1.0 - EPS);
            total += if y == 1.0 {
                params.kappa * (1.0 - p).powf(params.alpha) * p.ln()
            } else {
                let other = (0..classes).any(|k| k != c && y_cell[k] > 0.0);
                let w = if other { params.kappa } else { 1.0 };
                w * (1.0 - y).powf(params.beta) * p.powf(params.alpha) * (1.0 - p).ln()
            };
        }
    }
    Ok(-total / params.n_obj.max(1) as f64)
}

/// `focal_loss(pred_full, truth) + gamma * focal_loss(pred_no_ra, truth)`,
/// where `pred_no_ra` is the output computed with the RA input zeroed.
pub fn combined_loss(
    pred_full: ArrayView4<f64>,
    pred_no_ra: ArrayView4<f64>,
    truth: ArrayView4<f64>,
    params: &LossParams,
) -> Result<f64> {
    let full = focal_loss(pred_full, truth, params)?;
    let aux = focal_loss(pred_no_ra, truth, params)?;
    Ok(full + params.gamma * aux)
}
