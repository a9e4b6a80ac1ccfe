//! Library side of the `hyperchain` command-line tool.

pub mod report;
pub mod run;
pub mod spec;
