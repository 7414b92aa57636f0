//! Compiles the Rust snippets of the guide in `book/` as doctests.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/representations.md")]
pub mod representations {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/inversion.md")]
pub mod inversion {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/preprocessing.md")]
pub mod preprocessing {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/file-formats.md")]
pub mod file_formats {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
