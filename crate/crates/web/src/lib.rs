//! Browser bindings: a steppable heatmap, probability curves for both
//! operator orders against Grover, and a tessellation viewer.

use gridsearch::io::config::{parse_config, ExperimentConfig};
use gridsearch::io::heatmap::{HeatmapStyle, DEFAULT_COLORS};
use gridsearch::operators::{apply_oracle, apply_partition_diffusion, DiffusionSpec, OracleSpec};
use gridsearch::simulator::Step;
use gridsearch::{run, run_grover_reference, GridState, MarkedSet, Order, RunConfig};
use wasm_bindgen::prelude::*;

/// Largest side the demo accepts; keeps a frame under a few milliseconds.
pub const MAX_SIDE: usize = 256;

fn build(
    side: usize,
    tile: usize,
    tessellation: &str,
    marks: &str,
    order: &str,
) -> Result<RunConfig, String> {
    if side > MAX_SIDE {
        return Err(format!("side {side} exceeds the demo limit of {MAX_SIDE}"));
    }
    let mut text =
        format!("L = {side}\nd = {tile}\ntessellation = {tessellation}\norder = {order}\n");
    if !marks.trim().is_empty() {
        text.push_str(&format!("marked = {marks}\n"));
    }
    let cfg: ExperimentConfig = parse_config(&text).map_err(|e| e.to_string())?;
    let point = cfg
        .points()
        .into_iter()
        .next()
        .ok_or("empty configuration")?;
    cfg.run_config(&point).map_err(|e| e.to_string())
}

/// A search in progress, advanced one round at a time.
#[wasm_bindgen]
pub struct Walk {
    state: GridState,
    marked: MarkedSet,
    oracle: OracleSpec,
    local: DiffusionSpec,
    dispersion: DiffusionSpec,
    steps: Vec<Step>,
    round: u32,
    style: HeatmapStyle,
}

impl Walk {
    pub fn create(
        side: usize,
        tile: usize,
        tessellation: &str,
        marks: &str,
        order: &str,
    ) -> Result<Walk, String> {
        let cfg = build(side, tile, tessellation, marks, order)?;
        let err = |e: gridsearch::Error| e.to_string();
        Ok(Walk {
            state: GridState::uniform(cfg.geometry),
            oracle: OracleSpec::new(cfg.marked.clone()),
            local: DiffusionSpec::new(cfg.local).map_err(err)?,
            dispersion: DiffusionSpec::new(cfg.dispersion).map_err(err)?,
            steps: cfg.schedule.steps().to_vec(),
            marked: cfg.marked,
            round: 0,
            style: HeatmapStyle::default(),
        })
    }

    fn advance(&mut self) -> Result<(), gridsearch::Error> {
        for step in &self.steps {
            match step {
                Step::Oracle => apply_oracle(&mut self.state, &self.oracle)?,
                Step::LocalDiffusion => apply_partition_diffusion(&mut self.state, &self.local)?,
                Step::Dispersion => apply_partition_diffusion(&mut self.state, &self.dispersion)?,
            }
        }
        self.round += 1;
        Ok(())
    }
}

#[wasm_bindgen]
impl Walk {
    /// `marks` is `row,col` pairs separated by `;`; empty places one mark
    /// just past the grid center.
    #[wasm_bindgen(constructor)]
    pub fn new(
        side: usize,
        tile: usize,
        tessellation: &str,
        marks: &str,
        order: &str,
    ) -> Result<Walk, JsError> {
        Walk::create(side, tile, tessellation, marks, order).map_err(|e| JsError::new(&e))
    }

    pub fn step(&mut self, rounds: u32) -> Result<(), JsError> {
        for _ in 0..rounds {
            self.advance().map_err(|e| JsError::new(&e.to_string()))?;
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.state = GridState::uniform(self.state.geometry());
        self.round = 0;
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn side(&self) -> usize {
        self.state.geometry().side()
    }

    #[wasm_bindgen(js_name = markedProbability)]
    pub fn marked_probability(&self) -> f64 {
        self.state.marked_probability(&self.marked)
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.state.amplitudes().to_vec()
    }

    /// `side × side` RGBA pixels, ready for `ImageData`.
    pub fn rgba(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.state.amplitudes().len() * 4);
        for &a in self.state.amplitudes() {
            out.extend_from_slice(&self.style.color(a));
            out.push(255);
        }
        out
    }
}

/// Bin colors as flat RGB triples, darkest first.
#[wasm_bindgen]
pub fn palette() -> Vec<u8> {
    DEFAULT_COLORS.concat()
}

pub fn curves(side: usize, tile: usize, marks: &str, rounds: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(3 * (rounds + 1));
    let mut marked_count = 1;
    for order in [Order::Ltr, Order::Rtl] {
        let mut cfg = build(side, tile, "square", marks, order.name())?;
        cfg.max_iterations = rounds.max(1);
        marked_count = cfg.marked.len();
        let trace = run(&cfg).map_err(|e| e.to_string())?;
        out.extend((0..=rounds).map(|k| trace.probability_at(k)));
    }
    let grover = run_grover_reference(side * side, marked_count, rounds.max(1))
        .map_err(|e| e.to_string())?;
    out.extend((0..=rounds).map(|k| grover.probability_at(k)));
    Ok(out)
}

/// Marked probability for rounds `0..=rounds` as three consecutive series:
/// left-to-right order, right-to-left order, then global Grover.
#[wasm_bindgen(js_name = probabilityCurves)]
pub fn probability_curves(
    side: usize,
    tile: usize,
    marks: &str,
    rounds: usize,
) -> Result<Vec<f64>, JsError> {
    curves(side, tile, marks, rounds).map_err(|e| JsError::new(&e))
}

pub fn groups(
    side: usize,
    tile: usize,
    tessellation: &str,
    which: &str,
) -> Result<Vec<u32>, String> {
    let cfg = build(side, tile, tessellation, "", "ltr")?;
    let p = match which {
        "local" => cfg.local,
        "dispersion" => cfg.dispersion,
        other => {
            return Err(format!(
                "unknown partition {other:?} (expected local or dispersion)"
            ))
        }
    };
    Ok(p.group_ids().into_iter().map(|g| g as u32).collect())
}

/// Group id of every cell, row-major.
#[wasm_bindgen(js_name = partitionGroups)]
pub fn partition_groups(
    side: usize,
    tile: usize,
    tessellation: &str,
    which: &str,
) -> Result<Vec<u32>, JsError> {
    groups(side, tile, tessellation, which).map_err(|e| JsError::new(&e))
}
