//! Command-line front end: descriptor files in, reports out.

pub mod descriptor;
pub mod error;
pub mod run;

pub use descriptor::Descriptor;
pub use error::{CliError, CliResult};
