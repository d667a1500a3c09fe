//! Numerical core of the GA-BP volatility forecaster.
//!
//! Everything here is pure computation over in-memory data: table repair,
//! descriptive diagnostics, feature construction, the three-layer network and
//! its backpropagation trainer, the real-coded genetic algorithm that searches
//! its initial weights, forecast metrics, and a seeded GARCH(1,1) market
//! generator. File formats, the CLI and thread pools live in the `gabp` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod evolve;
pub mod features;
pub mod ingest;
pub mod metrics;
pub mod network;
pub mod stats;
pub mod synth;

mod math;
mod rng;

pub use evolve::{GaConfig, GaRun, MutationVariant, CrossoverMode};
pub use features::Dataset;
pub use ingest::{PriceTable, RawTable};
pub use metrics::EvalReport;
pub use network::{Activation, Chromosome, GeneBounds, NetShape, Network};
pub use rng::{derive_stream_seed, seeded_rng, Rng64};
pub use synth::GarchParams;
