//! Command-line harness: state parsing, batch experiments and output writers.

pub mod cli;
pub mod commands;
pub mod error;
pub mod expr;
pub mod output;
pub mod plot;
pub mod state_arg;
