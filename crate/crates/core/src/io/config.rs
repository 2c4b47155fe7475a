//! Flat `key = value` experiment configuration.
//!
//! One key per line, `#` starts a comment, lists are comma-separated.
//! Marked cells are `row,col` pairs joined by `;`; alternative placements in
//! `sweep_marked` are separated by `|`.
//!
//! ```text
//! L = 20
//! d = 4
//! tessellation = square
//! marked = 5,5; 15,15
//! order = ltr
//! snapshot_stride = 1
//! emit_heatmaps = true
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::simulator::{default_horizon, Order, RunConfig};
use crate::state::{GridGeometry, MarkedSet};
use crate::tessellation::{
    cross_partition, four_corners_partition, shifted_square_partition, square_partition, Partition,
};

/// Which built-in tiling drives both diffusions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Tessellation {
    #[default]
    Square,
    Cross,
    Corners,
}

impl Tessellation {
    pub fn name(self) -> &'static str {
        match self {
            Tessellation::Square => "square",
            Tessellation::Cross => "cross",
            Tessellation::Corners => "corners",
        }
    }

    /// Divisibility rule for side `side` and parameter `d`, as an error message.
    pub fn check(self, side: usize, d: usize) -> Option<String> {
        match self {
            Tessellation::Square if d == 0 => Some("d must be positive".into()),
            Tessellation::Square if !side.is_multiple_of(d) => {
                Some(format!("square tiles: d = {d} does not divide L = {side}"))
            }
            Tessellation::Cross if !side.is_multiple_of(5) => {
                Some(format!("cross tiling: 5 does not divide L = {side}"))
            }
            Tessellation::Corners if d == 0 => Some("d must be positive".into()),
            Tessellation::Corners if !side.is_multiple_of(2 * d) => Some(format!(
                "four-corners: 2d = {} does not divide L = {side}",
                2 * d
            )),
            _ => None,
        }
    }

    /// Default translation between the local and dispersion tilings.
    pub fn default_shift(self, d: usize) -> usize {
        match self {
            Tessellation::Square => d / 2,
            Tessellation::Cross => 2,
            Tessellation::Corners => d,
        }
    }

    /// Local partition and the dispersion partition (local moved by `shift`).
    pub fn partitions(
        self,
        g: GridGeometry,
        d: usize,
        shift: Option<usize>,
    ) -> Result<(Partition, Partition)> {
        let local = match self {
            Tessellation::Square => square_partition(g, d)?,
            Tessellation::Cross => cross_partition(g)?,
            Tessellation::Corners => four_corners_partition(g, d)?,
        };
        let dispersion = match (self, shift) {
            (Tessellation::Square, None) => shifted_square_partition(g, d)?,
            (_, s) => {
                let s = s.unwrap_or_else(|| self.default_shift(d)) as i64;
                local.translate(s, s)
            }
        };
        Ok((local, dispersion))
    }
}

impl fmt::Display for Tessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tessellation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "square" => Ok(Tessellation::Square),
            "cross" => Ok(Tessellation::Cross),
            "corners" | "four-corners" => Ok(Tessellation::Corners),
            other => Err(format!("unknown tessellation {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmitFlags {
    pub trace: bool,
    pub snapshots: bool,
    pub heatmaps: bool,
    pub partition: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags {
            trace: true,
            snapshots: false,
            heatmaps: false,
            partition: false,
        }
    }
}

pub type Placement = Vec<(i64, i64)>;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Grid sides to run.
    pub sides: Vec<usize>,
    pub tiles: Vec<usize>,
    pub tessellations: Vec<Tessellation>,
    /// `None` places one marked cell at the default position for each side.
    pub placements: Vec<Option<Placement>>,
    pub dispersion_shift: Option<usize>,
    pub order: Order,
    /// `None` means `⌈4√n⌉` rounds.
    pub max_iterations: Option<usize>,
    pub snapshot_stride: usize,
    pub out_dir: PathBuf,
    pub emit: EmitFlags,
    pub heatmap_scale: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sides: Vec::new(),
            tiles: vec![4],
            tessellations: vec![Tessellation::Square],
            placements: vec![None],
            dispersion_shift: None,
            order: Order::default(),
            max_iterations: None,
            snapshot_stride: 0,
            out_dir: PathBuf::from("out"),
            emit: EmitFlags::default(),
            heatmap_scale: 8,
        }
    }
}

/// One combination of the sweep lists.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub side: usize,
    pub tile: usize,
    pub tessellation: Tessellation,
    pub placement_index: usize,
    pub placement: Option<Placement>,
}

impl SweepPoint {
    pub fn label(&self) -> String {
        match self.tessellation {
            Tessellation::Cross => format!("L{}_cross_m{}", self.side, self.placement_index),
            t => format!(
                "L{}_{}_d{}_m{}",
                self.side, t, self.tile, self.placement_index
            ),
        }
    }
}

impl ExperimentConfig {
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &side in &self.sides {
            for &tessellation in &self.tessellations {
                // crosses ignore d
                let tiles: &[usize] = if tessellation == Tessellation::Cross {
                    &self.tiles[..1]
                } else {
                    &self.tiles
                };
                for &tile in tiles {
                    for (placement_index, placement) in self.placements.iter().enumerate() {
                        out.push(SweepPoint {
                            side,
                            tile,
                            tessellation,
                            placement_index,
                            placement: placement.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn run_config(&self, point: &SweepPoint) -> Result<RunConfig> {
        let geometry = GridGeometry::new(point.side)?;
        let marked = match &point.placement {
            None => MarkedSet::default_for(geometry),
            Some(cells) => MarkedSet::new(geometry, cells.iter().copied())?,
        };
        let (local, dispersion) =
            point
                .tessellation
                .partitions(geometry, point.tile, self.dispersion_shift)?;
        Ok(RunConfig {
            geometry,
            marked,
            local,
            dispersion,
            schedule: self.order.into(),
            max_iterations: self
                .max_iterations
                .unwrap_or_else(|| default_horizon(geometry)),
            snapshot_stride: self.snapshot_stride,
        })
    }

    /// Every violated rule across all sweep combinations.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.sides.is_empty() {
            v.push("missing required key: L, n or sweep_n".into());
        }
        if self.tiles.is_empty() || self.tessellations.is_empty() || self.placements.is_empty() {
            v.push("sweep lists must not be empty".into());
        }
        if self.max_iterations == Some(0) {
            v.push("max_iterations must be positive".into());
        }
        for &side in &self.sides {
            if side < 2 {
                v.push(format!("L = {side} is too small (need L >= 2)"));
                continue;
            }
            for &t in &self.tessellations {
                let tiles: &[usize] = if t == Tessellation::Cross {
                    &[5]
                } else {
                    &self.tiles
                };
                for &d in tiles {
                    if let Some(msg) = t.check(side, d) {
                        v.push(msg);
                    }
                }
            }
            for cells in self.placements.iter().flatten() {
                if cells.is_empty() {
                    v.push("marked placement is empty".into());
                }
                for &(i, j) in cells {
                    if i < 0 || j < 0 || i as usize >= side || j as usize >= side {
                        v.push(format!("marked cell ({i}, {j}) lies outside L = {side}"));
                    }
                }
                let mut sorted = cells.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    v.push("marked placement lists a cell twice".into());
                }
            }
        }
        v.dedup();
        v
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str, errors: &mut Vec<String>) -> Vec<T>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .filter_map(|s| match s.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(format!("{key}: cannot parse {s:?}: {e}"));
                None
            }
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str, errors: &mut Vec<String>) -> Option<T>
where
    T::Err: fmt::Display,
{
    match value.parse() {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{key}: cannot parse {value:?}: {e}"));
            None
        }
    }
}

fn parse_placement(key: &str, value: &str, errors: &mut Vec<String>) -> Option<Placement> {
    let mut cells = Vec::new();
    for cell in value.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = cell.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [i, j] => match (i.parse(), j.parse()) {
                (Ok(i), Ok(j)) => cells.push((i, j)),
                _ => {
                    errors.push(format!("{key}: cannot parse cell {cell:?}"));
                    return None;
                }
            },
            _ => {
                errors.push(format!("{key}: cell {cell:?} must be `row,col`"));
                return None;
            }
        }
    }
    Some(cells)
}

const KEYS: &[&str] = &[
    "L",
    "n",
    "d",
    "tessellation",
    "dispersion_shift",
    "marked",
    "order",
    "max_iterations",
    "snapshot_stride",
    "out",
    "emit_trace",
    "emit_snapshots",
    "emit_heatmaps",
    "emit_partition",
    "heatmap_scale",
    "sweep_n",
    "sweep_d",
    "sweep_tessellation",
    "sweep_marked",
];

/// Parses and validates a configuration, reporting every problem at once.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut errors = Vec::new();
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {}: expected `key = value`", lineno + 1));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            errors.push(format!("line {}: unknown key {key:?}", lineno + 1));
            continue;
        }
        if kv.insert(key, value).is_some() {
            errors.push(format!("line {}: duplicate key {key:?}", lineno + 1));
        }
    }

    let mut cfg = ExperimentConfig::default();
    let side = kv
        .get("L")
        .and_then(|v| parse_one::<usize>("L", v, &mut errors));
    let side_from_n = kv.get("n").and_then(|v| {
        let n = parse_one::<usize>("n", v, &mut errors)?;
        let l = n.isqrt();
        if l * l != n {
            errors.push(format!("n = {n} is not a perfect square"));
            None
        } else {
            Some(l)
        }
    });
    let sweep: Option<Vec<usize>> = kv.get("sweep_n").map(|v| {
        parse_list::<usize>("sweep_n", v, &mut errors)
            .into_iter()
            .filter_map(|n| {
                let l = n.isqrt();
                if l * l == n {
                    Some(l)
                } else {
                    errors.push(format!("sweep_n: {n} is not a perfect square"));
                    None
                }
            })
            .collect()
    });
    match (side, side_from_n, sweep) {
        (Some(a), Some(b), _) if a != b => {
            errors.push(format!("L = {a} disagrees with n = {}", b * b));
        }
        (Some(_), _, Some(_)) | (_, Some(_), Some(_)) => {
            errors.push("give either L/n or sweep_n, not both".into());
        }
        (Some(l), _, None) | (None, Some(l), None) => cfg.sides = vec![l],
        (None, None, Some(s)) => cfg.sides = s,
        (None, None, None) => {}
    }

    if let Some(v) = kv.get("d") {
        cfg.tiles = parse_one("d", v, &mut errors).into_iter().collect();
    }
    if let Some(v) = kv.get("sweep_d") {
        if kv.contains_key("d") {
            errors.push("give either d or sweep_d, not both".into());
        }
        cfg.tiles = parse_list("sweep_d", v, &mut errors);
    }
    if let Some(v) = kv.get("tessellation") {
        cfg.tessellations = parse_one("tessellation", v, &mut errors)
            .into_iter()
            .collect();
    }
    if let Some(v) = kv.get("sweep_tessellation") {
        if kv.contains_key("tessellation") {
            errors.push("give either tessellation or sweep_tessellation, not both".into());
        }
        cfg.tessellations = parse_list("sweep_tessellation", v, &mut errors);
    }
    if let Some(v) = kv.get("marked") {
        cfg.placements = vec![parse_placement("marked", v, &mut errors)];
    }
    if let Some(v) = kv.get("sweep_marked") {
        if kv.contains_key("marked") {
            errors.push("give either marked or sweep_marked, not both".into());
        }
        cfg.placements = v
            .split('|')
            .map(|p| parse_placement("sweep_marked", p, &mut errors))
            .collect();
    }
    if cfg.placements.iter().any(Option::is_none) {
        cfg.placements.retain(Option::is_some);
        if cfg.placements.is_empty() {
            cfg.placements.push(None);
        }
    }

    if let Some(v) = kv.get("dispersion_shift") {
        cfg.dispersion_shift = parse_one("dispersion_shift", v, &mut errors);
    }
    if let Some(v) = kv.get("order") {
        if let Some(o) = parse_one("order", v, &mut errors) {
            cfg.order = o;
        }
    }
    if let Some(v) = kv.get("max_iterations") {
        cfg.max_iterations = parse_one("max_iterations", v, &mut errors);
    }
    if let Some(v) = kv.get("snapshot_stride") {
        cfg.snapshot_stride = parse_one("snapshot_stride", v, &mut errors).unwrap_or(0);
    }
    if let Some(v) = kv.get("heatmap_scale") {
        cfg.heatmap_scale = parse_one("heatmap_scale", v, &mut errors).unwrap_or(8);
    }
    if let Some(v) = kv.get("out") {
        cfg.out_dir = PathBuf::from(v);
    }
    let flags: [(&str, &mut bool); 4] = [
        ("emit_trace", &mut cfg.emit.trace),
        ("emit_snapshots", &mut cfg.emit.snapshots),
        ("emit_heatmaps", &mut cfg.emit.heatmaps),
        ("emit_partition", &mut cfg.emit.partition),
    ];
    for (key, slot) in flags {
        if let Some(v) = kv.get(key) {
            if let Some(b) = parse_one(key, v, &mut errors) {
                *slot = b;
            }
        }
    }

    if errors.is_empty() {
        errors = cfg.violations();
    } else {
        errors.extend(
            cfg.violations()
                .into_iter()
                .filter(|v| !v.starts_with("missing")),
        );
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(errors))
    }
}
