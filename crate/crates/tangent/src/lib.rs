//! File formats, the built-in corpus and the command line for
//! `tangent-core`.

pub mod cli;
pub mod corpus;
pub mod format;
pub mod report;

pub use cli::{run, Outcome};
