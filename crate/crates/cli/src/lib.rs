//! Command-line front end: graph files in, canonical polynomials, reports and
//! certificates out.

pub mod commands;
pub mod graph_file;

pub use commands::{Failure, FuzzConfig, Outcome};
pub use graph_file::{GraphFile, ParseError};
