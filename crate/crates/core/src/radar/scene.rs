use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::RadarConfig;
use crate::error::{Error, Result};

/// Object classes carried through labels and evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectClass {
    Pedestrian,
    Cyclist,
    Car,
}

impl ObjectClass {
    pub const ALL: [ObjectClass; 3] = [ObjectClass::Pedestrian, ObjectClass::Cyclist, ObjectClass::Car];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectClass::Pedestrian => "pedestrian",
            ObjectClass::Cyclist => "cyclist",
            ObjectClass::Car => "car",
        }
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::config(format!("unknown class {s:?}")))
    }
}

/// Analytic point reflector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTarget {
    /// Range (m).
    pub range: f64,
    /// Azimuth (rad), positive to the right of boresight.
    pub azimuth: f64,
    /// Radial velocity (m/s), positive when receding.
    pub radial_velocity: f64,
    /// Linear amplitude of the de-chirped return.
    pub amplitude: f64,
    pub class: ObjectClass,
}

impl PointTarget {
    pub fn new(range: f64, azimuth: f64, radial_velocity: f64, amplitude: f64, class: ObjectClass) -> Self {
        Self {
            range,
            azimuth,
            radial_velocity,
            amplitude,
            class,
        }
    }

    pub fn validate(&self, cfg: &RadarConfig) -> Result<()> {
        let r_max = cfg.max_range();
        if !(self.range > 0.0 && self.range <= r_max) {
            return Err(Error::domain(format!("range {} m outside (0, {r_max:.3}]", self.range)));
        }
        if !(self.azimuth.abs() < FRAC_PI_2 && self.azimuth.abs() <= cfg.max_angle()) {
            return Err(Error::domain(format!(
                "azimuth {:.3} deg outside the field of view",
                self.azimuth.to_degrees()
            )));
        }
        let v_max = cfg.max_velocity();
        if !(self.radial_velocity.abs() < v_max) {
            return Err(Error::domain(format!(
                "radial velocity {} m/s outside (-{v_max:.3}, {v_max:.3})",
                self.radial_velocity
            )));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::domain(format!("amplitude {} must be > 0", self.amplitude)));
        }
        Ok(())
    }
}

/// JSON record for one target. Angles may be given in radians (`theta`) or
/// degrees (`theta_deg`).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TargetRecord {
    r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_deg: Option<f64>,
    #[serde(default)]
    v: f64,
    #[serde(default = "unit_amplitude")]
    amp: f64,
    class: ObjectClass,
}

fn unit_amplitude() -> f64 {
    1.0
}

impl TryFrom<TargetRecord> for PointTarget {
    type Error = Error;

    fn try_from(rec: TargetRecord) -> Result<Self> {
        let azimuth = match (rec.theta, rec.theta_deg) {
            (Some(rad), None) => rad,
            (None, Some(deg)) => deg.to_radians(),
            (None, None) => 0.0,
            (Some(_), Some(_)) => return Err(Error::config("target gives both theta and theta_deg")),
        };
        Ok(PointTarget::new(rec.r, azimuth, rec.v, rec.amp, rec.class))
    }
}

impl From<&PointTarget> for TargetRecord {
    fn from(t: &PointTarget) -> Self {
        TargetRecord {
            r: t.range,
            theta: None,
            theta_deg: Some(t.azimuth.to_degrees()),
            v: t.radial_velocity,
            amp: t.amplitude,
            class: t.class,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SceneDocument {
    frames: Vec<Vec<TargetRecord>>,
}

/// Ordered frames of point targets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub frames: Vec<Vec<PointTarget>>,
}

impl Scene {
    pub fn new(frames: Vec<Vec<PointTarget>>) -> Self {
        Self { frames }
    }

    /// The same target list repeated for `frames` frames.
    pub fn repeated(targets: Vec<PointTarget>, frames: usize) -> Self {
        Self {
            frames: vec![targets; frames],
        }
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn validate(&self, cfg: &RadarConfig) -> Result<()> {
        for (t, frame) in self.frames.iter().enumerate() {
            for target in frame {
                target
                    .validate(cfg)
                    .map_err(|e| Error::domain(format!("frame {t}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SceneDocument = serde_json::from_str(text)?;
        let frames = doc
            .frames
            .into_iter()
            .map(|frame| frame.into_iter().map(PointTarget::try_from).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene { frames })
    }

    pub fn to_json(&self) -> String {
        let doc = SceneDocument {
            frames: self
                .frames
                .iter()
                .map(|f| f.iter().map(TargetRecord::from).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("scene serializes")
    }
}
