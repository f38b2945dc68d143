//! Catalog handling, result cache and reports for the `vlab` command.

pub mod cache;
pub mod catalog;
pub mod commands;
pub mod report;

pub use commands::run;
