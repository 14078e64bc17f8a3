//! File formats, configuration files, a multi-threaded executor and the
//! command-line driver for [`tvar_core`].

pub mod cli;
pub mod config;
mod error;
pub mod exec;
pub mod formats;
pub mod manifest;

pub use error::{Error, Result};
pub use exec::Parallel;
