//! Waveform and array configuration, with the closed-form resolution and
//! bin-mapping formulas that every downstream oracle leans on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Slack used when flooring a bin coordinate, so that values which are
/// exact integers in closed form (e.g. `64 * sin(30 deg)`) do not drop a bin because
/// of the last ulp.
const FLOOR_SLACK: f64 = 1e-9;

/// FFT sizes for the three transform stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FftPoints {
    pub range: usize,
    pub velocity: usize,
    pub angle: usize,
}

impl Default for FftPoints {
    fn default() -> Self {
        Self {
            range: 128,
            velocity: 128,
            angle: 128,
        }
    }
}

/// FMCW waveform, TDM-MIMO array and FFT sizing. All quantities in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    /// Carrier frequency `fc` (Hz).
    pub carrier_freq: f64,
    /// Swept bandwidth `B` (Hz).
    pub sweep_bandwidth: f64,
    /// Chirp slope `S` (Hz/s).
    pub sweep_slope: f64,
    /// ADC sampling rate `fs` (samples/s).
    pub sampling_freq: f64,
    /// Chirps per frame `Nc`, counted over all transmitters.
    pub chirps_per_frame: usize,
    /// Fast-time samples per chirp `Ns`.
    pub samples_per_chirp: usize,
    /// Chirp repetition period `Tc` (s).
    pub chirp_duration: f64,
    pub num_tx: usize,
    pub num_rx_physical: usize,
    /// Receive element spacing `d` (m). Half a wavelength when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_spacing: Option<f64>,
    /// Frame rate `fF` (frames/s).
    pub frame_rate: f64,
    #[serde(default)]
    pub fft_points: FftPoints,
}

impl RadarConfig {
    /// TI AWR1843 setup: 77 GHz, 670 MHz sweep,
    /// 21 MHz/us slope, 4 Msps, 255 chirps of 128 samples, 2 Tx x 4 Rx.
    pub fn awr1843() -> Self {
        Self {
            carrier_freq: 77e9,
            sweep_bandwidth: 670e6,
            sweep_slope: 21e12,
            sampling_freq: 4e6,
            chirps_per_frame: 255,
            samples_per_chirp: 128,
            chirp_duration: 120e-6,
            num_tx: 2,
            num_rx_physical: 4,
            element_spacing: None,
            frame_rate: 30.0,
            fft_points: FftPoints::default(),
        }
    }

    /// Same configuration with `Tc = 1 / (Nc * fF)`, i.e. the chirp train
    /// filling the whole frame period.
    pub fn with_frame_filling_chirps(mut self) -> Self {
        self.chirp_duration = 1.0 / (self.chirps_per_frame as f64 * self.frame_rate);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RadarConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_freq", self.carrier_freq),
            ("sweep_bandwidth", self.sweep_bandwidth),
            ("sweep_slope", self.sweep_slope),
            ("sampling_freq", self.sampling_freq),
            ("chirp_duration", self.chirp_duration),
            ("frame_rate", self.frame_rate),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{name} must be finite and > 0, got {value}")));
            }
        }
        if let Some(d) = self.element_spacing {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::config(format!("element_spacing must be > 0, got {d}")));
            }
        }
        if self.samples_per_chirp == 0 || self.num_rx_physical == 0 || self.num_tx == 0 {
            return Err(Error::config("sample, Tx and Rx counts must be >= 1"));
        }
        if self.chirps_per_frame < self.num_tx {
            return Err(Error::config(format!(
                "{} chirps cannot cover a {}-Tx TDM cycle",
                self.chirps_per_frame, self.num_tx
            )));
        }
        let FftPoints { range, velocity, angle } = self.fft_points;
        if range == 0 || velocity < 2 || angle < 2 {
            return Err(Error::config("FFT sizes must be >= 2"));
        }
        if velocity % 2 != 0 || angle % 2 != 0 {
            return Err(Error::config(
                "velocity and angle FFT sizes must be even (zero-centered axes)",
            ));
        }
        if self.samples_per_chirp > range {
            return Err(Error::config(format!(
                "samples_per_chirp {} exceeds range FFT size {}",
                self.samples_per_chirp, range
            )));
        }
        if self.virtual_elements() > angle {
            return Err(Error::config(format!(
                "{} virtual elements exceed angle FFT size {}",
                self.virtual_elements(),
                angle
            )));
        }
        Ok(())
    }

    /// `lambda = c0 / fc`.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Element spacing with the half-wavelength default applied.
    pub fn spacing(&self) -> f64 {
        self.element_spacing.unwrap_or_else(|| self.wavelength() / 2.0)
    }

    /// Virtual array size `N_Rx = num_tx * num_rx_physical`.
    pub fn virtual_elements(&self) -> usize {
        self.num_tx * self.num_rx_physical
    }

    /// Complete TDM cycles per frame; a trailing partial cycle is dropped by
    /// the Velocity FFT.
    pub fn chirps_per_tx(&self) -> usize {
        self.chirps_per_frame / self.num_tx
    }

    pub fn range_resolution(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.sweep_bandwidth)
    }

    pub fn velocity_resolution(&self) -> f64 {
        self.wavelength() / (2.0 * self.chirps_per_frame as f64 * self.chirp_duration)
    }

    /// `lambda / (N_Rx d cos theta)` in radians.
    pub fn angle_resolution_at(&self, theta: f64) -> f64 {
        self.wavelength() / (self.virtual_elements() as f64 * self.spacing() * theta.cos())
    }

    pub fn max_range(&self) -> f64 {
        self.sampling_freq * SPEED_OF_LIGHT / (2.0 * self.sweep_slope)
    }

    pub fn max_velocity(&self) -> f64 {
        self.wavelength() / (4.0 * self.chirp_duration)
    }

    /// Unambiguous radial speed once the chirps are split across the TDM
    /// transmitters: each per-Tx stream is sampled every `num_tx * Tc`.
    pub fn tdm_max_velocity(&self) -> f64 {
        self.max_velocity() / self.num_tx as f64
    }

    pub fn max_angle(&self) -> f64 {
        (self.wavelength() / (2.0 * self.spacing())).min(1.0).asin()
    }

    /// Metres per Range-FFT bin, `c0 fs / (2 Mr S)`.
    pub fn range_bin_width(&self) -> f64 {
        SPEED_OF_LIGHT * self.sampling_freq / (2.0 * self.fft_points.range as f64 * self.sweep_slope)
    }

    /// `f_b = 2 S r / c0`.
    pub fn beat_frequency(&self, range: f64) -> f64 {
        2.0 * self.sweep_slope * range / SPEED_OF_LIGHT
    }

    /// Chirp-to-chirp phase rotation `4 pi v Tc / lambda` (signed).
    pub fn doppler_phase_shift(&self, velocity: f64) -> f64 {
        4.0 * PI * velocity * self.chirp_duration / self.wavelength()
    }

    /// Fractional Range-FFT bin coordinate of a range.
    pub fn range_bin_coord(&self, range: f64) -> f64 {
        2.0 * self.fft_points.range as f64 * self.sweep_slope * range / (SPEED_OF_LIGHT * self.sampling_freq)
    }

    /// `m_r = floor(2 Mr S r / (c0 fs))`, defined on `[0, R_max]`.
    pub fn range_bin_of(&self, range: f64) -> Result<usize> {
        let r_max = self.max_range();
        if !(0.0..=r_max).contains(&range) {
            return Err(Error::domain(format!("range {range} m outside [0, {r_max:.3}] m")));
        }
        let bin = (self.range_bin_coord(range) + FLOOR_SLACK).floor() as usize;
        Ok(bin.min(self.fft_points.range - 1))
    }

    /// Inverse of [`range_bin_coord`](Self::range_bin_coord).
    pub fn range_of_bin(&self, bin: f64) -> f64 {
        bin * self.range_bin_width()
    }

    /// Fractional, signed Angle-FFT bin coordinate `M_theta d sin(theta) / lambda`.
    pub fn angle_bin_coord(&self, theta: f64) -> f64 {
        self.fft_points.angle as f64 * self.spacing() * theta.sin() / self.wavelength()
    }

    /// `m_theta = floor(M_theta d sin(theta) / lambda)`, signed (boresight = 0).
    pub fn angle_bin_of(&self, theta: f64) -> Result<i64> {
        let limit = self.max_angle();
        if !(theta.abs() <= limit) {
            return Err(Error::domain(format!(
                "azimuth {:.3} deg outside +/-{:.3} deg",
                theta.to_degrees(),
                limit.to_degrees()
            )));
        }
        Ok((self.angle_bin_coord(theta) + FLOOR_SLACK).floor() as i64)
    }

    /// Maps a signed angle bin onto the zero-centered axis `[0, M_theta)`.
    pub fn angle_index(&self, signed_bin: i64) -> usize {
        centered_index(signed_bin, self.fft_points.angle)
    }

    /// `sin(theta)` at the center of a zero-centered angle index.
    pub fn sin_of_angle_index(&self, index: usize) -> f64 {
        let m = self.fft_points.angle;
        (index as f64 - (m / 2) as f64) * self.wavelength() / (m as f64 * self.spacing())
    }

    /// Signed velocity-bin coordinate of a radial speed after TDM
    /// de-interleaving (not wrapped).
    pub fn velocity_bin_coord(&self, velocity: f64) -> f64 {
        let per_tx_step = self.num_tx as f64 * self.doppler_phase_shift(velocity);
        per_tx_step * self.fft_points.velocity as f64 / (2.0 * PI)
    }

    /// Zero-centered Velocity-FFT index where a target with radial speed `v`
    /// peaks (nearest bin, aliased into the axis).
    pub fn velocity_index_of(&self, velocity: f64) -> usize {
        centered_index(
            self.velocity_bin_coord(velocity).round() as i64,
            self.fft_points.velocity,
        )
    }

    /// Radial speed at the center of a zero-centered velocity index.
    pub fn velocity_of_index(&self, index: usize) -> f64 {
        let m = self.fft_points.velocity;
        let signed = index as f64 - (m / 2) as f64;
        let per_tx_step = 2.0 * PI * signed / m as f64;
        per_tx_step / self.num_tx as f64 * self.wavelength() / (4.0 * PI * self.chirp_duration)
    }
}

/// Wraps a signed bin onto a zero-centered axis of length `len`.
pub fn centered_index(signed_bin: i64, len: usize) -> usize {
    let len = len as i64;
    (signed_bin + len / 2).rem_euclid(len) as usize
}
