//! Library side of the `netctl` binary: command implementations and the
//! experiment sweep, exposed so tests can drive them in-process.

pub mod commands;
pub mod output;
pub mod sweep;
