use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Antenna gain `G(theta)` tabulated on a uniform azimuth grid spanning
/// `[-pi/2, pi/2]`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct GainProfile {
    values: Vec<f64>,
}

impl Default for GainProfile {
    fn default() -> Self {
        Self::uniform()
    }
}

impl GainProfile {
    pub fn uniform() -> Self {
        Self { values: vec![1.0, 1.0] }
    }

    /// `cos^2(theta)`, floored at 1e-6 so the endfire samples stay positive.
    pub fn cos_squared(points: usize) -> Self {
        let points = points.max(2);
        let values = (0..points)
            .map(|i| {
                let theta = -FRAC_PI_2 + std::f64::consts::PI * i as f64 / (points - 1) as f64;
                theta.cos().powi(2).max(1e-6)
            })
            .collect();
        Self { values }
    }

    pub fn from_table(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::config("gain table needs at least two samples"));
        }
        if values.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
            return Err(Error::config("gain samples must be finite and > 0"));
        }
        Ok(Self { values })
    }

    pub fn gain(&self, theta: f64) -> f64 {
        let n = self.values.len();
        let pos = ((theta.clamp(-FRAC_PI_2, FRAC_PI_2) + FRAC_PI_2) / std::f64::consts::PI) * (n - 1) as f64;
        let i = (pos.floor() as usize).min(n - 2);
        let f = pos - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.values.len();
        (0..n).all(|i| (self.values[i] - self.values[n - 1 - i]).abs() <= 1e-12 * self.values[i])
    }
}
