//! Batch pipeline around `tabfeat-core`: configuration, CSV data contract,
//! synthetic data and the `tabfeat` command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod synth;
pub mod table;

pub use config::PipelineConfig;
pub use error::{PipelineError, Result};
