//! Pairwise image encodings of a univariate series.
//!
//! Every encoding fills an `S x S` matrix with `f(x_i, x_j)`, where the row
//! index `i` is the first argument and the column index `j` the second:
//!
//! | kind        | entry `R[i][j]`                  | diagonal          |
//! |-------------|----------------------------------|-------------------|
//! | `BinaryRp`  | `1` if `|x_i - x_j| <= eps` else `0` | `1`           |
//! | `Urp`       | `|x_i - x_j|`                    | `0`               |
//! | `Irp`       | `ln(x_i / x_j)`                  | `0`               |
//! | `Xirp`      | `ln(x_i / x_j)` off the diagonal | `x_i`             |
//! | `Gasf`      | `cos(acos x_i + acos x_j)`       | `2 x_i^2 - 1`     |
//! | `Naive`     | `x_i`                            | `x_i`             |
//!
//! Encoders never rescale their input. Log-return encodings require strictly
//! positive values and the angular field requires values in `[0, 1]`; fit a
//! [`ScalingParams`] with [`crate::preprocessing::fit_scaler`] first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaling::ScalingParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RepresentationKind {
    /// Thresholded recurrence plot.
    BinaryRp { epsilon: f64 },
    /// Unthresholded recurrence (distance) plot.
    Urp,
    /// Intertemporal return plot.
    Irp,
    /// Extended intertemporal return plot: IRP with the series on the diagonal.
    Xirp,
    /// Gramian angular summation field.
    Gasf,
    /// Each row repeats one observation.
    Naive,
}

impl RepresentationKind {
    /// Short lowercase label, as used on the command line.
    pub fn label(&self) -> &'static str {
        match self {
            Self::BinaryRp { .. } => "binary-rp",
            Self::Urp => "urp",
            Self::Irp => "irp",
            Self::Xirp => "xirp",
            Self::Gasf => "gasf",
            Self::Naive => "naive",
        }
    }

    /// Whether the diagonal alone determines the series.
    pub fn is_invertible(&self) -> bool {
        matches!(self, Self::Xirp | Self::Gasf | Self::Naive)
    }

    /// Whether the off-diagonal entries are unchanged by `x -> c x`, `c > 0`.
    pub fn is_scale_invariant(&self) -> bool {
        matches!(self, Self::Irp | Self::Xirp)
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BinaryRp { epsilon } => write!(f, "BinaryRP(eps={epsilon})"),
            Self::Urp => f.write_str("URP"),
            Self::Irp => f.write_str("IRP"),
            Self::Xirp => f.write_str("XIRP"),
            Self::Gasf => f.write_str("GASF"),
            Self::Naive => f.write_str("Naive"),
        }
    }
}

/// Square matrix produced by one of the encoders, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationMatrix {
    kind: RepresentationKind,
    side: usize,
    data: Vec<f64>,
    scaling: Option<ScalingParams>,
}

impl RepresentationMatrix {
    /// Wraps row-major `data` of an externally produced image, e.g. a GAN sample.
    pub fn from_raw(kind: RepresentationKind, side: usize, data: Vec<f64>) -> Result<Self> {
        if side < 2 {
            return Err(Error::MalformedMatrix(format!("side {side} is smaller than 2")));
        }
        if data.len() != side * side {
            return Err(Error::MalformedMatrix(format!(
                "{} entries do not form a {side}x{side} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::MalformedMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / side,
                pos % side
            )));
        }
        Ok(Self {
            kind,
            side,
            data,
            scaling: None,
        })
    }

    pub fn with_scaling(mut self, scaling: ScalingParams) -> Self {
        self.scaling = Some(scaling);
        self
    }

    pub fn kind(&self) -> RepresentationKind {
        self.kind
    }

    pub fn scaling(&self) -> Option<&ScalingParams> {
        self.scaling.as_ref()
    }

    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.side + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.side..(i + 1) * self.side]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.side).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.side).map(|i| self.get(i, i)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.side;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Self {
            data,
            ..self.clone()
        }
    }

    /// Rows as nested vectors, mostly for tests and printing.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.side).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn from_parts(kind: RepresentationKind, side: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), side * side);
        Self {
            kind,
            side,
            data,
            scaling: None,
        }
    }
}

/// Fills a symmetric matrix from `f(x_i, x_j)` evaluated on the upper triangle.
fn symmetric(x: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let n = x.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = f(x[i], x[j]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    data
}

pub fn encode_binary_rp(x: &TimeSeries, epsilon: f64) -> Result<RepresentationMatrix> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let data = symmetric(x.values(), |a, b| {
        if (a - b).abs() <= epsilon {
            1.0
        } else {
            0.0
        }
    });
    Ok(RepresentationMatrix::from_parts(
        RepresentationKind::BinaryRp { epsilon },
        x.len(),
        data,
    ))
}

pub fn encode_urp(x: &TimeSeries) -> RepresentationMatrix {
    let data = symmetric(x.values(), |a, b| (a - b).abs());
    RepresentationMatrix::from_parts(RepresentationKind::Urp, x.len(), data)
}

fn require_positive(x: &TimeSeries) -> Result<()> {
    match x.values().iter().enumerate().find(|(_, &v)| v <= 0.0) {
        Some((index, &value)) => Err(Error::NonPositiveValue { index, value }),
        None => Ok(()),
    }
}

/// Log-return matrix with the lower triangle stored as the exact negation of
/// the upper one.
fn log_returns(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let r = (x[i] / x[j]).ln();
            data[i * n + j] = r;
            data[j * n + i] = -r;
        }
    }
    data
}

pub fn encode_irp(x: &TimeSeries) -> Result<RepresentationMatrix> {
    require_positive(x)?;
    Ok(RepresentationMatrix::from_parts(
        RepresentationKind::Irp,
        x.len(),
        log_returns(x.values()),
    ))
}

/// Extended intertemporal return plot.
///
/// ```
/// use xirp::{encode_xirp, TimeSeries};
///
/// let x = TimeSeries::new(vec![1.0, 2.0, 4.0])?;
/// let r = encode_xirp(&x)?;
/// assert_eq!(r.diagonal(), vec![1.0, 2.0, 4.0]);
/// assert!((r.get(0, 2) - (0.25f64).ln()).abs() < 1e-15);
/// assert_eq!(r.get(2, 0), -r.get(0, 2));
/// # Ok::<(), xirp::Error>(())
/// ```
pub fn encode_xirp(x: &TimeSeries) -> Result<RepresentationMatrix> {
    require_positive(x)?;
    let n = x.len();
    let mut data = log_returns(x.values());
    for (i, &v) in x.values().iter().enumerate() {
        data[i * n + i] = v;
    }
    Ok(RepresentationMatrix::from_parts(RepresentationKind::Xirp, n, data))
}

pub fn encode_gasf(x: &TimeSeries) -> Result<RepresentationMatrix> {
    if let Some((index, &value)) = x
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| !(0.0..=1.0).contains(&v))
    {
        return Err(Error::OutOfUnitRange { index, value });
    }
    let angles: Vec<f64> = x.values().iter().map(|v| v.acos()).collect();
    let data = symmetric(&angles, |a, b| (a + b).cos());
    Ok(RepresentationMatrix::from_parts(RepresentationKind::Gasf, x.len(), data))
}

pub fn encode_naive(x: &TimeSeries) -> RepresentationMatrix {
    let n = x.len();
    let data = x
        .values()
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, n))
        .collect();
    RepresentationMatrix::from_parts(RepresentationKind::Naive, n, data)
}

/// Encodes `x` with the encoder matching `kind`.
pub fn encode(kind: RepresentationKind, x: &TimeSeries) -> Result<RepresentationMatrix> {
    match kind {
        RepresentationKind::BinaryRp { epsilon } => encode_binary_rp(x, epsilon),
        RepresentationKind::Urp => Ok(encode_urp(x)),
        RepresentationKind::Irp => encode_irp(x),
        RepresentationKind::Xirp => encode_xirp(x),
        RepresentationKind::Gasf => encode_gasf(x),
        RepresentationKind::Naive => Ok(encode_naive(x)),
    }
}
