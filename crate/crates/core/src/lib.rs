#![no_std]
extern crate alloc;

pub mod backtest;
pub mod catch22;
pub mod dataset;
pub mod error;
pub mod features;
pub mod moments;
pub mod ranks;
pub mod sentiment;
pub mod series;
pub mod signature;

pub use error::{Error, Result};
