//! Text formats, self-checks, benchmarks and commands for the `quasisep` binary.

pub mod bench;
pub mod commands;
pub mod format;
pub mod verify;
