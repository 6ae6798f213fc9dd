//! Corpus files, verification runs and reports for the `polarlift` CLI.

pub mod cli;
pub mod corpus;
pub mod pipeline;
pub mod report;
