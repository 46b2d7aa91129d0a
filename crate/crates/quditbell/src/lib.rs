//! Host-side companion to `quditbell-core`: a line-oriented circuit text
//! format, seeded random instances, invariant suites, report rendering and
//! the `quditbell` command line.

pub mod cli;
pub mod config;
pub mod random;
pub mod report;
pub mod text;
pub mod verify;
