//! Sweeps, figure datasets and the validation table behind the `afmimo`
//! command.

pub mod config;
pub mod figure;
pub mod sweep;
