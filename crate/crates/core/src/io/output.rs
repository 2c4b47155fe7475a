//! CSV emitters for traces, snapshots and partitions.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! every value parses back bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulator::{AmplitudeGrid, SimulationTrace};
use crate::tessellation::Partition;

pub const TRACE_HEADER: &str = "iteration,marked_probability,marked_amplitude,nominal_steps";

fn write(path: &Path, body: String) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

pub fn trace_csv(trace: &SimulationTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.iterations() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (k, (p, steps)) in trace
        .probabilities()
        .iter()
        .zip(trace.nominal_steps())
        .enumerate()
    {
        let _ = writeln!(out, "{},{:.16e},{:.16e},{}", k + 1, p, p.sqrt(), steps);
    }
    out
}

pub fn emit_trace_csv(trace: &SimulationTrace, path: &Path) -> Result<()> {
    write(path, trace_csv(trace))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub marked_probability: f64,
    pub marked_amplitude: f64,
    pub nominal_steps: u64,
}

/// Parses a trace CSV written by [`emit_trace_csv`].
pub fn parse_trace_csv(text: &str) -> std::result::Result<Vec<TraceRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(format!("line {}: expected 4 fields", i + 2));
            }
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {e}", i + 2);
            Ok(TraceRow {
                iteration: f[0].parse().map_err(|e| bad(&e))?,
                marked_probability: f[1].parse().map_err(|e| bad(&e))?,
                marked_amplitude: f[2].parse().map_err(|e| bad(&e))?,
                nominal_steps: f[3].parse().map_err(|e| bad(&e))?,
            })
        })
        .collect()
}

pub fn snapshot_csv(grid: &AmplitudeGrid) -> String {
    let mut out = String::from("i,j,amplitude\n");
    for (i, row) in grid.rows().enumerate() {
        for (j, a) in row.iter().enumerate() {
            let _ = writeln!(out, "{i},{j},{a:.16e}");
        }
    }
    out
}

pub fn emit_snapshot_csv(grid: &AmplitudeGrid, path: &Path) -> Result<()> {
    write(path, snapshot_csv(grid))
}

pub fn partition_csv(p: &Partition) -> String {
    let g = p.geometry();
    let mut out = String::from("i,j,group\n");
    for (idx, group) in p.group_ids().into_iter().enumerate() {
        let c = g.coord_of(idx);
        let _ = writeln!(out, "{},{},{}", c.row, c.col, group);
    }
    out
}

pub fn emit_partition_csv(p: &Partition, path: &Path) -> Result<()> {
    write(path, partition_csv(p))
}
