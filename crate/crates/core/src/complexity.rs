//! FLOPs and memory footprint of convolution stacks.
//!
//! Time is `sum I * K * C_in * C_out` and space is
//! `sum K * C_in * C_out` parameters plus `sum I * C_out` feature-map cells,
//! where `I` and `K` are per-axis products of the output feature map and
//! the kernel. Pooling and fully connected layers are not modeled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Conv,
    TransposedConv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub kind: LayerKind,
    pub n: usize,
    /// Feature-map size per axis.
    #[serde(rename = "I")]
    pub feature: Vec<u64>,
    /// Kernel size per axis.
    #[serde(rename = "K")]
    pub kernel: Vec<u64>,
    pub c_in: u64,
    pub c_out: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    /// Layer reads from somewhere other than the previous layer.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub branch: bool,
}

impl LayerSpec {
    pub fn conv(feature: Vec<u64>, kernel: Vec<u64>, c_in: u64, c_out: u64) -> Self {
        Self {
            kind: LayerKind::Conv,
            n: feature.len(),
            feature,
            kernel,
            c_in,
            c_out,
            dilation: None,
            stride: None,
            branch: false,
        }
    }

    pub fn feature_cells(&self) -> u128 {
        self.feature.iter().map(|&x| x as u128).product()
    }

    pub fn kernel_cells(&self) -> u128 {
        self.kernel.iter().map(|&x| x as u128).product()
    }

    pub fn flops(&self) -> u128 {
        self.feature_cells() * self.kernel_cells() * self.c_in as u128 * self.c_out as u128
    }

    pub fn params(&self) -> u128 {
        self.kernel_cells() * self.c_in as u128 * self.c_out as u128
    }

    pub fn feature_map(&self) -> u128 {
        self.feature_cells() * self.c_out as u128
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.n) {
            return Err(Error::config(format!("layer dimensionality {} not in 1..=4", self.n)));
        }
        if self.feature.len() != self.n || self.kernel.len() != self.n {
            return Err(Error::config(format!(
                "{}-D layer needs {} feature and kernel sizes, got {} and {}",
                self.n,
                self.n,
                self.feature.len(),
                self.kernel.len()
            )));
        }
        let counts = self.feature.iter().chain(&self.kernel).chain([&self.c_in, &self.c_out]);
        let extras = self.dilation.iter().chain(&self.stride);
        if counts.chain(extras).any(|&x| x == 0) {
            return Err(Error::config("layer sizes, channels, dilation and stride must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub params: u128,
    pub feature_map: u128,
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    /// Per-layer checks plus channel chaining between consecutive layers
    /// not marked as branches.
    pub fn validate(&self) -> Result<()> {
        for (i, layer) in self.layers.iter().enumerate() {
            layer
                .validate()
                .map_err(|e| Error::config(format!("{}: layer {i}: {e}", self.name)))?;
            if i > 0 && !layer.branch && self.layers[i - 1].c_out != layer.c_in {
                return Err(Error::config(format!(
                    "{}: layer {i} takes {} channels but layer {} emits {}",
                    self.name,
                    layer.c_in,
                    i - 1,
                    self.layers[i - 1].c_out
                )));
            }
        }
        Ok(())
    }

    pub fn flops(&self) -> u128 {
        self.layers.iter().map(LayerSpec::flops).sum()
    }

    pub fn space(&self) -> Space {
        Space {
            params: self.layers.iter().map(LayerSpec::params).sum(),
            feature_map: self.layers.iter().map(LayerSpec::feature_map).sum(),
        }
    }
}

/// Layer stacks shipped with the crate, keyed by file stem. Sizes beyond
/// the first layer are reconstructions, see the `note` field of each model.
pub const BUNDLED: [(&str, &str); 3] = [
    ("rodnet_cdc", include_str!("../models/rodnet_cdc.json")),
    ("ramp_cnn", include_str!("../models/ramp_cnn.json")),
    ("4d_cdc", include_str!("../models/4d_cdc.json")),
];

pub fn bundled(key: &str) -> Result<ModelSpec> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::config(format!("no bundled model named {key:?}")))?;
    ModelSpec::from_json(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: String,
    pub denominator: String,
    pub flops: f64,
    pub params: f64,
    pub feature_map: f64,
}

/// Every ordered pair `(a, b)`, `a != b`, with `a / b` ratios.
pub fn compare(models: &[ModelSpec]) -> Result<Vec<Ratio>> {
    if models.len() < 2 {
        return Err(Error::config("comparison needs at least two models"));
    }
    let ratio = |a: u128, b: u128| if b == 0 { f64::NAN } else { a as f64 / b as f64 };
    let mut out = Vec::new();
    for (i, a) in models.iter().enumerate() {
        for (j, b) in models.iter().enumerate() {
            if i == j {
                continue;
            }
            let (sa, sb) = (a.space(), b.space());
            out.push(Ratio {
                numerator: a.name.clone(),
                denominator: b.name.clone(),
                flops: ratio(a.flops(), b.flops()),
                params: ratio(sa.params, sb.params),
                feature_map: ratio(sa.feature_map, sb.feature_map),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_layer() -> LayerSpec {
        LayerSpec::conv(vec![16, 32, 32], vec![3, 3, 3], 2, 64)
    }

    #[test]
    fn hand_values() {
        let l = example_layer();
        assert_eq!(l.flops(), 56_623_104);
        assert_eq!(l.params(), 3456);
        assert_eq!(l.feature_map(), 1_048_576);
        let empty = ModelSpec {
            name: "empty".into(),
            note: None,
            layers: vec![],
        };
        assert_eq!(empty.flops(), 0);
        assert_eq!(empty.space(), Space::default());
    }

    #[test]
    fn scaling() {
        let l = example_layer();
        let wide = LayerSpec {
            c_out: 128,
            ..l.clone()
        };
        assert_eq!(wide.flops(), 2 * l.flops());
        let big = LayerSpec {
            feature: l.feature.iter().map(|x| 2 * x).collect(),
            ..l.clone()
        };
        assert_eq!(big.flops(), 8 * l.flops());
        assert_eq!(big.params(), l.params());
    }

    #[test]
    fn json_schema() {
        let m = ModelSpec::from_json(
            r#"{"name":"m","layers":[{"kind":"conv","n":3,"I":[16,32,32],"K":[9,5,5],"c_in":2,"c_out":64},
                {"kind":"transposed_conv","n":3,"I":[16,32,32],"K":[3,6,6],"c_in":64,"c_out":3,"stride":2}]}"#,
        )
        .unwrap();
        assert_eq!(m.layers[1].kind, LayerKind::TransposedConv);
        assert_eq!(m.layers[1].stride, Some(2));
    }

    #[test]
    fn invalid_specs() {
        let chain = r#"{"name":"m","layers":[{"kind":"conv","n":1,"I":[8],"K":[3],"c_in":1,"c_out":4},
            {"kind":"conv","n":1,"I":[8],"K":[3],"c_in":5,"c_out":4}]}"#;
        assert!(ModelSpec::from_json(chain).is_err());
        assert!(
            ModelSpec::from_json(&chain.replace(r#""c_in":5,"c_out":4}"#, r#""c_in":5,"c_out":4,"branch":true}"#))
                .is_ok()
        );
        let zero = r#"{"name":"m","layers":[{"kind":"conv","n":1,"I":[0],"K":[3],"c_in":1,"c_out":4}]}"#;
        assert!(ModelSpec::from_json(zero).is_err());
        let rank = r#"{"name":"m","layers":[{"kind":"conv","n":2,"I":[8],"K":[3],"c_in":1,"c_out":4}]}"#;
        assert!(ModelSpec::from_json(rank).is_err());
        assert!(ModelSpec::from_json(r#"{"name":"m"}"#).is_err());
    }

    #[test]
    fn bundled_models_load_and_compare() {
        let models: Vec<_> = BUNDLED.iter().map(|(k, _)| bundled(k).unwrap()).collect();
        assert!(models.iter().all(|m| m.note.is_some()));
        let table = compare(&models).unwrap();
        assert_eq!(table.len(), 6);
        let same = compare(&[models[0].clone(), models[0].clone()]).unwrap();
        assert!(same
            .iter()
            .all(|r| r.flops == 1.0 && r.params == 1.0 && r.feature_map == 1.0));
        assert!(compare(&models[..1]).is_err());
    }
}
