//! Command-line front end for `smallcover-core`: JSON input formats, bundled
//! fixtures, per-fixture reports and the acceptance suite.

pub mod acceptance;
pub mod cli;
pub mod dump;
pub mod error;
pub mod fixtures;
pub mod input;
pub mod report;

pub use cli::run;
pub use error::CliError;
