//! Parameter sweeps and figure reproduction on top of `dvdp-core`.
//!
//! Every command writes CSV tables (with a config echo in the header) and
//! SVG plots into one output directory. Results are independent of the
//! worker count.

pub mod commands;
pub mod config;
pub mod output;
pub mod pool;
pub mod presets;
