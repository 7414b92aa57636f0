//! Image representations of univariate time series.
//!
//! A series of length `S` is encoded as an `S x S` matrix by applying a
//! pairwise function to every pair of observations. The extended
//! intertemporal return plot (XIRP) stores log returns `ln(x_i / x_j)` off
//! the diagonal and the series itself on the diagonal, which makes it
//! scale-invariant off the diagonal and invertible without a start value.
//! Recurrence plots, the Gramian angular summation field and a naive
//! row-repeat image are provided for comparison.
//!
//! ```
//! use xirp::{encode, invert, InversionMethod, RepresentationKind, TimeSeries};
//! use xirp::preprocessing::{apply_scaler, fit_scaler, invert_scaler};
//!
//! let x = TimeSeries::new(vec![-1.5, 0.2, 3.0, 2.4])?;
//! let params = fit_scaler(x.values(), RepresentationKind::Xirp)?;
//! let image = encode(RepresentationKind::Xirp, &apply_scaler(&x, &params)?)?;
//! let back = invert_scaler(&invert(&image, InversionMethod::Mean)?, &params)?;
//! for (a, b) in back.values().iter().zip(x.values()) {
//!     assert!((a - b).abs() < 1e-9);
//! }
//! # Ok::<(), xirp::Error>(())
//! ```
//!
//! Modules:
//!
//! - [`representation`]: the six encoders.
//! - [`inversion`]: diagonal, mean (IM) and random-column (IRC) inversion.
//! - [`preprocessing`]: truncation, windowing, scaling with exact inverse.
//! - [`generators`]: seeded synthetic processes and benchmark sweeps.
//! - [`metrics`]: score tables, best counts, ranks, IM/IRC improvement.
//! - [`tensor`]: the binary batch format and its JSON sidecar.

pub mod error;
pub mod generators;
pub mod inversion;
pub mod metrics;
pub mod preprocessing;
pub mod representation;
pub mod scaling;
pub mod series;
pub mod tensor;

pub use error::{Error, Result};
pub use inversion::{
    column_variants, extract_diagonal, invert, reconstruct_column, roundtrip_error, InversionMethod, Inverter,
};
pub use representation::{
    encode, encode_binary_rp, encode_gasf, encode_irp, encode_naive, encode_urp, encode_xirp, RepresentationKind,
    RepresentationMatrix,
};
pub use scaling::ScalingParams;
pub use series::{validate_series, TimeSeries};
