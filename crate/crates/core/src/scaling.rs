use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Record of an affine map `[source_min, source_max] -> [target_lo, target_hi]`.
///
/// A constant source (`source_min == source_max`) is stored with the
/// `constant` flag set: every input maps to the midpoint of the target range
/// and the inverse returns the constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ScalingParams {
    source_min: f64,
    source_max: f64,
    target_lo: f64,
    target_hi: f64,
    constant: bool,
}

impl ScalingParams {
    pub fn new(source_min: f64, source_max: f64, target_lo: f64, target_hi: f64) -> Result<Self> {
        check_target(target_lo, target_hi)?;
        if !(source_min.is_finite() && source_max.is_finite()) {
            return Err(Error::DegenerateParams(format!(
                "source range [{source_min}, {source_max}] is not finite"
            )));
        }
        if source_max <= source_min {
            return Err(Error::DegenerateParams(format!(
                "source_max {source_max} must exceed source_min {source_min}"
            )));
        }
        Ok(Self {
            source_min,
            source_max,
            target_lo,
            target_hi,
            constant: false,
        })
    }

    /// Parameters for a constant source.
    pub fn constant(value: f64, target_lo: f64, target_hi: f64) -> Result<Self> {
        check_target(target_lo, target_hi)?;
        if !value.is_finite() {
            return Err(Error::DegenerateParams(format!("constant {value} is not finite")));
        }
        Ok(Self {
            source_min: value,
            source_max: value,
            target_lo,
            target_hi,
            constant: true,
        })
    }

    /// Fits a min-max map of `values` onto `[target_lo, target_hi]`.
    pub fn fit(values: &[f64], target_lo: f64, target_hi: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateParams("cannot fit on an empty sample".into()));
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min == max {
            Self::constant(min, target_lo, target_hi)
        } else {
            Self::new(min, max, target_lo, target_hi)
        }
    }

    pub fn identity() -> Self {
        Self {
            source_min: 0.0,
            source_max: 1.0,
            target_lo: 0.0,
            target_hi: 1.0,
            constant: false,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn source_range(&self) -> (f64, f64) {
        (self.source_min, self.source_max)
    }

    pub fn target_range(&self) -> (f64, f64) {
        (self.target_lo, self.target_hi)
    }

    /// Slope of the forward map; zero for a constant source.
    pub fn factor(&self) -> f64 {
        if self.constant {
            0.0
        } else {
            (self.target_hi - self.target_lo) / (self.source_max - self.source_min)
        }
    }

    pub fn forward(&self, x: f64) -> f64 {
        if self.constant {
            return self.target_lo + 0.5 * (self.target_hi - self.target_lo);
        }
        (x - self.source_min) / (self.source_max - self.source_min) * (self.target_hi - self.target_lo)
            + self.target_lo
    }

    pub fn inverse(&self, y: f64) -> f64 {
        if self.constant {
            return self.source_min;
        }
        (y - self.target_lo) / (self.target_hi - self.target_lo) * (self.source_max - self.source_min)
            + self.source_min
    }
}

fn check_target(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::DegenerateParams(format!(
            "target range [{lo}, {hi}] must be finite with hi > lo"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    source_min: f64,
    source_max: f64,
    target_lo: f64,
    target_hi: f64,
    #[serde(default)]
    constant: bool,
}

impl TryFrom<RawParams> for ScalingParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        if raw.constant {
            if raw.source_min != raw.source_max {
                return Err(Error::DegenerateParams(
                    "constant params must have source_min == source_max".into(),
                ));
            }
            Self::constant(raw.source_min, raw.target_lo, raw.target_hi)
        } else {
            Self::new(raw.source_min, raw.source_max, raw.target_lo, raw.target_hi)
        }
    }
}

impl From<ScalingParams> for RawParams {
    fn from(p: ScalingParams) -> Self {
        Self {
            source_min: p.source_min,
            source_max: p.source_max,
            target_lo: p.target_lo,
            target_hi: p.target_hi,
            constant: p.constant,
        }
    }
}
