//! Command-line front end over the core library: JSON experiment configs
//! in; optimized energies, circuit resources, and fidelities out.
//!
//! The pieces compose left to right: [`config`] parses and validates the
//! experiment description, [`presets`] derives ansatz ladders from ranked
//! graphs, [`pipeline`] runs the optimization end to end, and [`report`]
//! renders the results as JSON, CSV, or a terminal table.

pub mod config;
pub mod pipeline;
pub mod presets;
pub mod report;
