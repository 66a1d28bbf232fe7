//! File formats and command-line front end for `ttdesign`.

pub mod cli;
pub mod format;

pub use cli::run;
