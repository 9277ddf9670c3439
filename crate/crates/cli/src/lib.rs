//! Command line front end for ritt-core.

pub mod commands;
pub mod parse;

pub use commands::{run, Outcome};
