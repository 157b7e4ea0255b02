//! File formats and reporting for the word sense induction workflow.
//!
//! The `wsi` binary wires these into subcommands; the modules are usable
//! as a library for tests and other tooling.

pub mod embed_io;
pub mod report;
pub mod tsv;
