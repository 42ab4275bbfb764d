//! Front-end for `sympinv`: job files, and the `invariants`, `check`,
//! `equivalence` and `signature` subcommands.

pub mod commands;
pub mod job;

pub use commands::{exit, CliError, Output};
pub use job::{Format, JobError, JobSpec, RawJob};
