//! Exact interval-valued valuations on finite posets, finite-support
//! measures and the dyadic Lebesgue approximants on `[0,1]`.

// The depth-cap error carries its best enclosure.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod drag;
pub mod error;
pub mod laws;
pub mod lebesgue;
pub mod measure;
pub mod monad;
pub mod spaces;
pub mod syntax;
pub mod valuation;

pub use drag::{DRag, ExtNonNeg, IntervalValue};
pub use error::{Error, Result};
