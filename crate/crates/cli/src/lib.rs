//! Library half of the `chevron` binary. The subcommand logic lives here so
//! integration tests can drive it without spawning processes; `main.rs` is a
//! thin argument-parsing shell.

pub mod args;
pub mod commands;
pub mod plot;
pub mod records;
pub mod render;
