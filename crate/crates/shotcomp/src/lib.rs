//! File formats, parallel simulation and the `shotcomp` command line on top of
//! [`shotcomp_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod output;
pub mod runner;
pub mod sweep;

pub use error::{Error, Result};
