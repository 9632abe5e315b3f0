//! Command-line front end for `sqz-core`: subcommands, TOML configs,
//! parameter sweeps and CSV / JSON / SVG output.

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod ops;
pub mod params;
pub mod state;
pub mod svg;
pub mod sweep;

pub use cli::run_cli;
pub use error::{CliError, CliResult};
