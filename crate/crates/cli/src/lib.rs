//! Command-line front end: argument handling, JSON reports, Newton polygon
//! drawings and the verification suite.

pub mod commands;
pub mod input;
pub mod report;
pub mod svg;
pub mod verify;

pub use commands::{run, Cli, Outcome};
