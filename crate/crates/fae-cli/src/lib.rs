//! Std companion to `fae-core`: Monte Carlo benchmark harness, CSV/JSON/SVG
//! exporters, verification suites, and the `fae` command-line interface.

pub mod bench;
pub mod cli;
pub mod export;
pub mod svg;
pub mod verify;
