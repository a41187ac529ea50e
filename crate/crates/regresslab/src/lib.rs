//! File formats, run configuration and command implementations for the
//! `regresslab` tool. The numerical work lives in `regresslab_core`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod json;
pub mod model;

pub use error::{CliError, Result};
