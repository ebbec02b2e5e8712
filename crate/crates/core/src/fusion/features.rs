use ndarray::{s, Array4, Axis};

use crate::error::{Error, Result};

/// Which perspective a feature tensor was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// `[channel, time, range, angle]`
    RangeAngle,
    /// `[channel, time, range, velocity]`
    RangeVelocity,
    /// `[channel, time, velocity, angle]`
    VelocityAngle,
    /// `[channel, time, range, angle]` after fusion
    Fused,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    pub kind: FeatureKind,
    pub data: Array4<f64>,
}

impl FeatureTensor {
    pub fn new(kind: FeatureKind, data: Array4<f64>) -> Result<Self> {
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("feature tensor holds non-finite values"));
        }
        Ok(Self { kind, data })
    }

    pub fn channels(&self) -> usize {
        self.data.dim().0
    }
}

fn expect_kind(t: &FeatureTensor, kind: FeatureKind) -> Result<()> {
    if t.kind != kind {
        return Err(Error::shape(format!("expected {kind:?} features, got {:?}", t.kind)));
    }
    Ok(())
}

/// Brings RV and VA features onto the RA grid and stacks all three along
/// the channel axis.
///
/// VA features are summed over velocity and replicated along range; RV
/// features are summed over velocity and replicated along angle. Output
/// channels are `[RA | RV | VA]`.
pub fn fuse_features(ra: &FeatureTensor, rv: &FeatureTensor, va: &FeatureTensor) -> Result<FeatureTensor> {
    expect_kind(ra, FeatureKind::RangeAngle)?;
    expect_kind(rv, FeatureKind::RangeVelocity)?;
    expect_kind(va, FeatureKind::VelocityAngle)?;
    let (c_ra, d, r, a) = ra.data.dim();
    let (c_rv, d_rv, r_rv, v_rv) = rv.data.dim();
    let (c_va, d_va, v_va, a_va) = va.data.dim();
    if d_rv != d || d_va != d {
        return Err(Error::shape(format!("time axes differ: RA {d}, RV {d_rv}, VA {d_va}")));
    }
    if r_rv != r {
        return Err(Error::shape(format!("RV range axis {r_rv} != RA range axis {r}")));
    }
    if a_va != a {
        return Err(Error::shape(format!("VA angle axis {a_va} != RA angle axis {a}")));
    }
    if v_rv != v_va {
        return Err(Error::shape(format!(
            "RV velocity axis {v_rv} != VA velocity axis {v_va}"
        )));
    }

    let rv_condensed = rv.data.sum_axis(Axis(3)); // [c, d, r]
    let va_condensed = va.data.sum_axis(Axis(2)); // [c, d, a]

    let mut out = Array4::zeros((c_ra + c_rv + c_va, d, r, a));
    out.slice_mut(s![..c_ra, .., .., ..]).assign(&ra.data);
    {
        let mut block = out.slice_mut(s![c_ra..c_ra + c_rv, .., .., ..]);
        for ((c, t, rr, _), x) in block.indexed_iter_mut() {
            *x = rv_condensed[[c, t, rr]];
        }
    }
    {
        let mut block = out.slice_mut(s![c_ra + c_rv.., .., .., ..]);
        for ((c, t, _, aa), x) in block.indexed_iter_mut() {
            *x = va_condensed[[c, t, aa]];
        }
    }
    FeatureTensor::new(FeatureKind::Fused, out)
}
