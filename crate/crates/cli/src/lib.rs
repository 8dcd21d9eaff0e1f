//! Library side of the `rgg` command: argument types, command dispatch,
//! output formatting and the validation oracles.

pub mod args;
pub mod commands;
pub mod format;
pub mod validate;

pub use args::Cli;
pub use commands::{exit_code, run, Output, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, EXIT_VALIDATION};
