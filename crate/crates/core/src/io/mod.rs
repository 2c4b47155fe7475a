//! Configuration parsing, experiment orchestration and file output.

pub mod config;
pub mod experiment;
pub mod heatmap;
pub mod output;
