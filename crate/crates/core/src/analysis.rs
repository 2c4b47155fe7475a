//! Post-processing of marked-probability traces.

use crate::error::{Error, Result};
use crate::simulator::SimulationTrace;
use crate::state::{Coord, GridState, MarkedSet};

/// A maximum of the marked probability. Iterations are 1-based rounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakSummary {
    pub iteration: usize,
    pub probability: f64,
    pub amplitude: f64,
}

impl PeakSummary {
    fn at(probabilities: &[f64], index: usize) -> Self {
        let probability = probabilities[index];
        PeakSummary {
            iteration: index + 1,
            probability,
            amplitude: probability.sqrt(),
        }
    }
}

/// Earliest iteration attaining the global maximum.
pub fn peak(probabilities: &[f64]) -> Result<PeakSummary> {
    if probabilities.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut best = 0;
    for (k, &p) in probabilities.iter().enumerate() {
        if p > probabilities[best] {
            best = k;
        }
    }
    Ok(PeakSummary::at(probabilities, best))
}

/// First local maximum: the earliest `k` with `p[k] ≥ p[k−1]` and
/// `p[k] > p[k+1]`. Falls back to [`peak`] when the trace never turns down.
///
/// The marked probability oscillates; later revivals can exceed the first
/// crest slightly, so the first crest is the quantity that tracks `√n`.
pub fn first_peak(probabilities: &[f64]) -> Result<PeakSummary> {
    if probabilities.is_empty() {
        return Err(Error::EmptyTrace);
    }
    for k in 0..probabilities.len().saturating_sub(1) {
        let rising = k == 0 || probabilities[k] >= probabilities[k - 1];
        if rising && probabilities[k] > probabilities[k + 1] {
            return Ok(PeakSummary::at(probabilities, k));
        }
    }
    peak(probabilities)
}

/// Power law `iterations ≈ prefactor · n^exponent`, fitted in log-log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS of the log-space residuals.
    pub residual: f64,
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::NonPositive(x, y));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let exponent = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = mean_y - exponent * mean_x;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(ScalingFit {
        exponent,
        prefactor: intercept.exp(),
        residual,
    })
}

/// Probability within Chebyshev distance `radius` (on the torus) of any marked cell.
pub fn neighborhood_mass(state: &GridState, marked: &MarkedSet, radius: usize) -> f64 {
    let g = state.geometry();
    let side = g.side();
    let mut inside = vec![false; g.cell_count()];
    let r = radius.min(side / 2) as i64;
    for &c in marked.cells() {
        for dr in -r..=r {
            for dc in -r..=r {
                inside[g.index(c.row as i64 + dr, c.col as i64 + dc)] = true;
            }
        }
    }
    state
        .amplitudes()
        .iter()
        .zip(&inside)
        .filter(|(_, &hit)| hit)
        .map(|(a, _)| a * a)
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiMarkedSummary {
    /// First crest of the combined marked probability.
    pub combined: PeakSummary,
    /// Each marked cell's probability at that iteration.
    pub per_item: Vec<(Coord, f64)>,
}

pub fn multi_marked_summary(
    trace: &SimulationTrace,
    marked: &MarkedSet,
) -> Result<MultiMarkedSummary> {
    if marked.len() < 2 {
        return Err(Error::SingleMarked(marked.len()));
    }
    let combined = first_peak(trace.probabilities())?;
    let split = trace.item_probabilities(combined.iteration);
    let per_item = marked
        .cells()
        .iter()
        .copied()
        .zip(split.iter().copied())
        .collect();
    Ok(MultiMarkedSummary { combined, per_item })
}
