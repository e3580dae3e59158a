//! Command-line front end for `kloos-core`: report rendering, the bundled
//! reference tables, binary caches, census export and the verification
//! suite.

pub mod cache;
pub mod cli;
pub mod error;
pub mod export;
pub mod par;
pub mod render;
pub mod tables;
pub mod verify;

pub use error::{CliError, CliResult};
