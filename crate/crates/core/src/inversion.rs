//! Recovering a series from a representation matrix.
//!
//! The diagonal of an XIRP, GASF or naive matrix determines the series on
//! its own. Generated matrices are not self-consistent, though, so the
//! off-diagonal carries extra information: column `j` together with the
//! diagonal baseline value `x_j` yields a full reconstruction of the series.
//! The `S` reconstructions are either averaged (IM) or one is drawn at
//! random (IRC).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::representation::{encode, RepresentationKind, RepresentationMatrix};
use crate::series::TimeSeries;

/// PRNG behind random column selection. A column index is drawn as
/// `ChaCha8Rng::seed_from_u64(seed).random_range(0..side)` with `rand` 0.9.
pub const IRC_PRNG: &str = "rand_chacha::ChaCha8Rng(seed_from_u64) + random_range(0..side)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum InversionMethod {
    /// Read the series off the diagonal, ignoring everything else.
    DiagonalOnly,
    /// Inversion by mean: average all column reconstructions.
    Mean,
    /// Inversion by random column: pick one column reconstruction.
    RandomColumn { seed: u64 },
}

impl fmt::Display for InversionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DiagonalOnly => f.write_str("diagonal"),
            Self::Mean => f.write_str("im"),
            Self::RandomColumn { seed } => write!(f, "irc(seed={seed})"),
        }
    }
}

/// How [`InversionMethod::Mean`] combines the column reconstructions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    #[default]
    Arithmetic,
    /// Mean in log space. XIRP only; every reconstruction must be positive.
    Geometric,
}

/// Column reconstructions of a matrix: column `j` of this matrix is the
/// series rebuilt from column `j` of the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnVariants {
    side: usize,
    data: Vec<f64>,
}

impl ColumnVariants {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.side + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.side).map(|i| self.get(i, j)).collect()
    }

    /// Elementwise arithmetic mean over columns.
    pub fn mean(&self) -> Vec<f64> {
        self.data
            .chunks_exact(self.side)
            .enumerate()
            .map(|(i, row)| shifted_mean(row, row[i]))
            .collect()
    }

    pub fn geometric_mean(&self) -> Result<Vec<f64>> {
        let n = self.side as f64;
        self.data
            .chunks_exact(self.side)
            .enumerate()
            .map(|(i, row)| {
                let mut log_sum = 0.0;
                for &v in row {
                    if v <= 0.0 {
                        return Err(Error::NonPositiveValue { index: i, value: v });
                    }
                    log_sum += v.ln();
                }
                Ok((log_sum / n).exp())
            })
            .collect()
    }
}

/// Mean of `values` accumulated as offsets from `pivot`; exact when every
/// value equals the pivot.
fn shifted_mean(values: &[f64], pivot: f64) -> f64 {
    pivot + values.iter().map(|v| v - pivot).sum::<f64>() / values.len() as f64
}

fn require_invertible(r: &RepresentationMatrix) -> Result<()> {
    if r.kind().is_invertible() {
        Ok(())
    } else {
        Err(Error::NotInvertible(r.kind()))
    }
}

fn gasf_diagonal_value(d: f64) -> f64 {
    ((d.clamp(-1.0, 1.0) + 1.0) / 2.0).sqrt()
}

/// Diagonal baseline as raw values; the kind must be invertible.
fn baseline(r: &RepresentationMatrix) -> Vec<f64> {
    let diag = r.diagonal();
    match r.kind() {
        RepresentationKind::Gasf => diag.into_iter().map(gasf_diagonal_value).collect(),
        _ => diag,
    }
}

/// Reads the series off the diagonal.
pub fn extract_diagonal(r: &RepresentationMatrix) -> Result<TimeSeries> {
    require_invertible(r)?;
    TimeSeries::new(baseline(r))
}

/// Fills `out[i]` with the reconstruction from column `j`.
fn fill_column(r: &RepresentationMatrix, base: &[f64], j: usize, mut out: impl FnMut(usize, f64)) {
    let n = r.side();
    match r.kind() {
        RepresentationKind::Xirp => {
            for i in 0..n {
                let v = if i == j { base[j] } else { base[j] * r.get(i, j).exp() };
                out(i, v);
            }
        }
        RepresentationKind::Gasf => {
            let phi_j = base[j].acos();
            for i in 0..n {
                let v = if i == j {
                    base[j]
                } else {
                    (r.get(i, j).clamp(-1.0, 1.0).acos() - phi_j).cos()
                };
                out(i, v);
            }
        }
        RepresentationKind::Naive => {
            for i in 0..n {
                out(i, r.get(i, j));
            }
        }
        _ => unreachable!("checked by require_invertible"),
    }
}

/// Rebuilds the series from column `j` and the diagonal baseline.
pub fn reconstruct_column(r: &RepresentationMatrix, j: usize) -> Result<TimeSeries> {
    require_invertible(r)?;
    if j >= r.side() {
        return Err(Error::IndexOutOfRange { index: j, side: r.side() });
    }
    let base = baseline(r);
    let mut values = vec![0.0; r.side()];
    fill_column(r, &base, j, |i, v| values[i] = v);
    TimeSeries::new(values)
}

pub fn column_variants(r: &RepresentationMatrix) -> Result<ColumnVariants> {
    require_invertible(r)?;
    let n = r.side();
    let base = baseline(r);
    let mut data = vec![0.0; n * n];
    for j in 0..n {
        fill_column(r, &base, j, |i, v| data[i * n + j] = v);
    }
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: pos / n,
            value: data[pos],
        });
    }
    Ok(ColumnVariants { side: n, data })
}

/// Column index chosen by random column inversion for a given seed.
pub fn random_column_index(seed: u64, side: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed).random_range(0..side)
}

/// Makes a generated matrix self-consistent before inversion.
///
/// XIRP off-diagonals become `(R - R^T) / 2` with the diagonal kept; GASF
/// becomes `(R + R^T) / 2`; every naive row is replaced by its mean.
pub fn repair_consistency(r: &RepresentationMatrix) -> Result<RepresentationMatrix> {
    require_invertible(r)?;
    let n = r.side();
    let mut data = vec![0.0; n * n];
    match r.kind() {
        RepresentationKind::Xirp => {
            for i in 0..n {
                data[i * n + i] = r.get(i, i);
                for j in i + 1..n {
                    let v = (r.get(i, j) - r.get(j, i)) / 2.0;
                    data[i * n + j] = v;
                    data[j * n + i] = -v;
                }
            }
        }
        RepresentationKind::Gasf => {
            for i in 0..n {
                for j in i..n {
                    let v = (r.get(i, j) + r.get(j, i)) / 2.0;
                    data[i * n + j] = v;
                    data[j * n + i] = v;
                }
            }
        }
        RepresentationKind::Naive => {
            for i in 0..n {
                let m = shifted_mean(r.row(i), r.get(i, i));
                data[i * n..(i + 1) * n].fill(m);
            }
        }
        _ => unreachable!("checked by require_invertible"),
    }
    let mut out = RepresentationMatrix::from_raw(r.kind(), n, data)?;
    if let Some(p) = r.scaling() {
        out = out.with_scaling(*p);
    }
    Ok(out)
}

/// Inversion settings beyond the method itself.
///
/// The defaults (arithmetic mean, no repair) use generated matrices as-is.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inverter {
    pub averaging: Averaging,
    pub repair: bool,
}

impl Inverter {
    pub fn invert(&self, r: &RepresentationMatrix, method: InversionMethod) -> Result<TimeSeries> {
        require_invertible(r)?;
        let repaired;
        let r = if self.repair {
            repaired = repair_consistency(r)?;
            &repaired
        } else {
            r
        };
        match method {
            InversionMethod::DiagonalOnly => extract_diagonal(r),
            InversionMethod::Mean => {
                let variants = column_variants(r)?;
                let values = match self.averaging {
                    Averaging::Arithmetic => variants.mean(),
                    Averaging::Geometric => {
                        if r.kind() != RepresentationKind::Xirp {
                            return Err(Error::InvalidParams(format!(
                                "geometric averaging applies to XIRP only, not {}",
                                r.kind()
                            )));
                        }
                        variants.geometric_mean()?
                    }
                };
                TimeSeries::new(values)
            }
            InversionMethod::RandomColumn { seed } => {
                reconstruct_column(r, random_column_index(seed, r.side()))
            }
        }
    }
}

/// Inverts with default settings.
///
/// ```
/// use xirp::{encode_xirp, invert, InversionMethod, TimeSeries};
///
/// let x = TimeSeries::new(vec![1.0, 2.0, 4.0])?;
/// let r = encode_xirp(&x)?;
/// for method in [
///     InversionMethod::DiagonalOnly,
///     InversionMethod::Mean,
///     InversionMethod::RandomColumn { seed: 7 },
/// ] {
///     let back = invert(&r, method)?;
///     for (a, b) in back.values().iter().zip(x.values()) {
///         assert!((a - b).abs() < 1e-12);
///     }
/// }
/// # Ok::<(), xirp::Error>(())
/// ```
pub fn invert(r: &RepresentationMatrix, method: InversionMethod) -> Result<TimeSeries> {
    Inverter::default().invert(r, method)
}

/// Largest absolute difference between `x` and its encode/invert roundtrip.
pub fn roundtrip_error(x: &TimeSeries, kind: RepresentationKind, method: InversionMethod) -> Result<f64> {
    let back = invert(&encode(kind, x)?, method)?;
    Ok(x
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
