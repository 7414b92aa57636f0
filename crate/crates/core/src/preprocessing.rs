//! Truncation, windowing and encoder-specific scaling.

use crate::error::{Error, Result};
use crate::representation::RepresentationKind;
use crate::scaling::ScalingParams;
use crate::series::TimeSeries;

/// Observation cap applied to every series before windowing.
pub const DEFAULT_LIMIT: usize = 1000;

/// Default target range for log-return encodings. The lower bound keeps
/// `|ln(x_i / x_j)| <= ln 10`.
pub const DEFAULT_POSITIVE_RANGE: (f64, f64) = (0.1, 1.0);

pub fn truncate(x: &TimeSeries, limit: usize) -> Result<TimeSeries> {
    if limit < 2 {
        return Err(Error::InvalidParams(format!("truncation limit {limit} is below 2")));
    }
    if x.len() <= limit {
        return Ok(x.clone());
    }
    TimeSeries::named(x.name(), x.values()[..limit].to_vec())
}

/// Number of windows of length `d` at `stride` that fit in `len` points.
pub fn window_count(len: usize, d: usize, stride: usize) -> usize {
    if d > len || stride == 0 {
        0
    } else {
        (len - d) / stride + 1
    }
}

/// Sliding windows `x[k*stride .. k*stride + d]`, in order.
pub fn window(x: &TimeSeries, d: usize, stride: usize) -> Result<Vec<TimeSeries>> {
    if stride == 0 {
        return Err(Error::InvalidParams("stride must be at least 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParams(format!("window length {d} is below 2")));
    }
    if d > x.len() {
        return Err(Error::WindowTooLong { window: d, len: x.len() });
    }
    x.values()
        .windows(d)
        .step_by(stride)
        .enumerate()
        .map(|(k, w)| TimeSeries::named(format!("{}#{k}", x.name()), w.to_vec()))
        .collect()
}

/// Target range an encoder needs, or `None` when it takes raw values.
pub fn target_range(kind: RepresentationKind, positive_range: (f64, f64)) -> Option<(f64, f64)> {
    match kind {
        RepresentationKind::Gasf => Some((0.0, 1.0)),
        RepresentationKind::Irp | RepresentationKind::Xirp => Some(positive_range),
        _ => None,
    }
}

/// Fits the scaler `kind` needs on `sample` (a whole series or its training split).
///
/// GASF maps onto `[0, 1]`, IRP/XIRP onto `[0.1, 1.0]`; the remaining kinds get
/// the identity.
pub fn fit_scaler(sample: &[f64], kind: RepresentationKind) -> Result<ScalingParams> {
    fit_scaler_with_range(sample, kind, DEFAULT_POSITIVE_RANGE)
}

pub fn fit_scaler_with_range(
    sample: &[f64],
    kind: RepresentationKind,
    positive_range: (f64, f64),
) -> Result<ScalingParams> {
    let (lo, hi) = positive_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "positive target range [{lo}, {hi}] must satisfy 0 < lo < hi"
        )));
    }
    match target_range(kind, positive_range) {
        Some((lo, hi)) => ScalingParams::fit(sample, lo, hi),
        None => Ok(ScalingParams::identity()),
    }
}

pub fn apply_scaler(x: &TimeSeries, p: &ScalingParams) -> Result<TimeSeries> {
    x.map(|v| p.forward(v))
}

pub fn invert_scaler(y: &TimeSeries, p: &ScalingParams) -> Result<TimeSeries> {
    y.map(|v| p.inverse(v))
}
