use std::ops::Index;

use crate::error::{Error, Result};

/// A validated univariate time series.
///
/// Holds at least two observations, all finite. Construction is the only
/// validation point, so any `TimeSeries` in hand satisfies both invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::named("", values)
    }

    pub fn named(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a validated series.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Applies `f` elementwise and re-validates the result.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::named(self.name.clone(), self.values.iter().map(|&v| f(v)).collect())
    }
}

impl Index<usize> for TimeSeries {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.values[index]
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Validates a series, returning it unchanged when every invariant holds.
///
/// Re-validating an already validated series is a no-op.
pub fn validate_series(series: TimeSeries) -> Result<TimeSeries> {
    check_values(&series.values)?;
    Ok(series)
}

fn check_values(values: &[f64]) -> Result<()> {
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    if values.len() < 2 {
        return Err(Error::TooShort { len: values.len() });
    }
    Ok(())
}
