//! File formats, parallel fitness evaluation and the command pipeline around
//! `gabp-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csvio;
pub mod error;
pub mod exec;
pub mod model;
pub mod pipeline;
pub mod svg;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use exec::Parallel;
pub use model::ModelFile;
