//! File formats, golden corpus, artifacts and the command-line front end.
pub mod artifacts;
pub mod cli;
pub mod golden;
pub mod parallel;
pub mod schema;
