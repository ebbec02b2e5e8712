use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gain::GainProfile;
use super::ops::{
    flip_augmented, interpolate_blanks, mix, translate_angle_augmented, translate_range_augmented, Augmented,
};
use crate::error::{Error, Result};
use crate::pipeline::RvaCube;
use crate::radar::RadarConfig;

/// One step of an augmentation recipe, as stored in JSON:
///
/// ```json
/// [{"op": "flip"},
///  {"op": "translate_range", "delta_r": 2.0},
///  {"op": "translate_angle", "delta_theta_deg": -10.0},
///  {"op": "interpolate"},
///  {"op": "mix", "other": "second.rcube"}]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum AugmentOp {
    Flip,
    TranslateRange {
        /// Range shift (m).
        delta_r: f64,
    },
    TranslateAngle {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_theta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_theta_deg: Option<f64>,
    },
    Mix {
        /// Reference to the other cube, resolved by the caller.
        other: String,
    },
    Interpolate,
}

impl AugmentOp {
    pub fn parse_recipe(text: &str) -> Result<Vec<AugmentOp>> {
        let ops: Vec<AugmentOp> = serde_json::from_str(text)?;
        for op in &ops {
            if let AugmentOp::TranslateAngle { .. } = op {
                op.delta_theta()?;
            }
        }
        Ok(ops)
    }

    /// Angle shift in radians for `TranslateAngle`.
    pub fn delta_theta(&self) -> Result<f64> {
        match *self {
            AugmentOp::TranslateAngle {
                delta_theta: Some(rad),
                delta_theta_deg: None,
            } => Ok(rad),
            AugmentOp::TranslateAngle {
                delta_theta: None,
                delta_theta_deg: Some(deg),
            } => Ok(deg.to_radians()),
            AugmentOp::TranslateAngle { .. } => Err(Error::config(
                "translate_angle needs exactly one of delta_theta / delta_theta_deg",
            )),
            _ => Err(Error::config("not a translate_angle step")),
        }
    }
}

/// Applies `ops` in order. `resolve` loads the cube named by a `mix` step.
pub fn apply_recipe<R, F>(
    cfg: &RadarConfig,
    gain: &GainProfile,
    mut state: Augmented,
    ops: &[AugmentOp],
    rng: &mut R,
    mut resolve: F,
) -> Result<Augmented>
where
    R: Rng + ?Sized,
    F: FnMut(&str) -> Result<RvaCube>,
{
    for op in ops {
        state = match op {
            AugmentOp::Flip => flip_augmented(&state),
            AugmentOp::TranslateRange { delta_r } => translate_range_augmented(cfg, &state, *delta_r)?,
            AugmentOp::TranslateAngle { .. } => translate_angle_augmented(cfg, &state, op.delta_theta()?, gain)?,
            AugmentOp::Mix { other } => {
                let other = resolve(other)?;
                Augmented {
                    cube: mix(&state.cube, &other)?,
                    ..state
                }
            }
            AugmentOp::Interpolate => {
                let data = interpolate_blanks(&state.cube.data, &state.blank, rng)?;
                Augmented::untouched(RvaCube { data }, state.targets)
            }
        };
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::TargetLocation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_recipe() {
        let text = r#"[{"op":"flip"},{"op":"translate_range","delta_r":2.0},
            {"op":"translate_angle","delta_theta_deg":-10.0},{"op":"interpolate"},
            {"op":"mix","other":"b.rcube"}]"#;
        let ops = AugmentOp::parse_recipe(text).unwrap();
        assert_eq!(ops.len(), 5);
        assert!((ops[2].delta_theta().unwrap() + 10f64.to_radians()).abs() < 1e-15);
        assert!(AugmentOp::parse_recipe(r#"[{"op":"translate_angle"}]"#).is_err());
        assert!(AugmentOp::parse_recipe(r#"[{"op":"rotate"}]"#).is_err());
    }

    #[test]
    fn recipe_runs_in_order_and_clears_blanks() {
        let cfg = RadarConfig::awr1843();
        let cube = RvaCube {
            data: ndarray::Array3::from_shape_fn((128, 128, 128), |(r, v, a)| {
                num_complex::Complex64::new(1.0 + ((r + 3 * v + 7 * a) % 5) as f64, 0.0)
            }),
        };
        let state = Augmented::untouched(
            cube.clone(),
            vec![TargetLocation {
                range: 10.0,
                azimuth: 0.1,
            }],
        );
        let ops = vec![
            AugmentOp::TranslateRange { delta_r: 3.0 },
            AugmentOp::Flip,
            AugmentOp::Mix { other: "self".into() },
            AugmentOp::Interpolate,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = apply_recipe(&cfg, &GainProfile::uniform(), state, &ops, &mut rng, |name| {
            assert_eq!(name, "self");
            Ok(cube.clone())
        })
        .unwrap();
        assert!(!out.blank.iter().any(|&b| b));
        assert!(out.targets[0].azimuth < 0.0);
        assert!((out.targets[0].range - 13.0).abs() < 1e-12);
    }
}
