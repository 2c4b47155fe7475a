//! Sweep orchestration and the reference-table comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::PeakSummary;
use crate::error::{Error, Result};
use crate::io::config::{ExperimentConfig, SweepPoint};
use crate::io::heatmap::{emit_heatmap, HeatmapStyle};
use crate::io::output::{emit_partition_csv, emit_snapshot_csv, emit_trace_csv};
use crate::simulator::{run, Order, RunConfig};
use crate::state::{Coord, GridGeometry, MarkedSet};

/// One published row: grid size, best marked amplitude, iterations to reach it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub n: usize,
    pub amplitude: f64,
    pub iterations: usize,
}

const fn row(n: usize, amplitude: f64, iterations: usize) -> ReferenceRow {
    ReferenceRow {
        n,
        amplitude,
        iterations,
    }
}

/// Published single-marked results for `n = 4^2 … 4^11`.
pub const REFERENCE_TABLE: [ReferenceRow; 10] = [
    row(16, 0.9531, 2),
    row(64, 0.9373, 6),
    row(256, 0.9023, 12),
    row(1024, 0.8626, 30),
    row(4096, 0.8338, 64),
    row(16384, 0.8073, 128),
    row(65536, 0.7812, 264),
    row(262144, 0.7581, 556),
    row(1048576, 0.7377, 1144),
    row(4194304, 0.7178, 2294),
];

/// Sizes the `table` preset runs unless told otherwise.
pub const DEFAULT_TABLE_SIZES: [usize; 7] = [16, 64, 256, 1024, 4096, 16384, 65536];

pub fn reference_row(n: usize) -> Option<ReferenceRow> {
    REFERENCE_TABLE.iter().copied().find(|r| r.n == n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub reference: ReferenceRow,
    pub order: Order,
    /// First crest of the marked probability, counted in four-operator rounds.
    pub first_peak: PeakSummary,
    /// Global maximum over the whole horizon.
    pub global_peak: PeakSummary,
}

impl TableEntry {
    /// The published iteration count charges two per round.
    pub fn iterations(&self) -> usize {
        2 * self.first_peak.iteration
    }

    pub fn amplitude_delta(&self) -> f64 {
        self.first_peak.amplitude - self.reference.amplitude
    }

    /// Relative iteration error, `(measured − published) / published`.
    pub fn iteration_error(&self) -> f64 {
        (self.iterations() as f64 - self.reference.iterations as f64)
            / self.reference.iterations as f64
    }
}

/// Runs every size under every order, single marked cell at the default spot,
/// square tiles of side 4.
pub fn table_entries(
    sizes: &[usize],
    orders: &[Order],
    max_iterations: Option<usize>,
) -> Result<Vec<TableEntry>> {
    let mut jobs = Vec::new();
    let mut problems = Vec::new();
    for &n in sizes {
        match reference_row(n) {
            Some(r) => jobs.extend(orders.iter().map(|&o| (r, o))),
            None => problems.push(format!("n = {n} has no reference row")),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    jobs.par_iter()
        .map(|&(reference, order)| {
            let g = GridGeometry::from_cell_count(reference.n)?;
            let mut cfg = RunConfig::new(g, MarkedSet::default_for(g))?.order(order);
            if let Some(k) = max_iterations {
                cfg.max_iterations = k;
            }
            let trace = run(&cfg)?;
            Ok(TableEntry {
                reference,
                order,
                first_peak: trace.first_peak(),
                global_peak: trace.peak(),
            })
        })
        .collect()
}

pub fn format_table(entries: &[TableEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8} {:>5} {:>7} {:>7} {:>8} {:>6} {:>6} {:>8} {:>7} {:>7}",
        "n", "order", "amp", "ref", "d_amp", "iters", "ref", "d_iters", "global", "at"
    );
    for e in entries {
        let _ = writeln!(
            out,
            "{:>8} {:>5} {:>7.4} {:>7.4} {:>+8.4} {:>6} {:>6} {:>+7.1}% {:>7.4} {:>7}",
            e.reference.n,
            e.order.name(),
            e.first_peak.amplitude,
            e.reference.amplitude,
            e.amplitude_delta(),
            e.iterations(),
            e.reference.iterations,
            100.0 * e.iteration_error(),
            e.global_peak.amplitude,
            2 * e.global_peak.iteration,
        );
    }
    out
}

pub fn table_csv(entries: &[TableEntry]) -> String {
    let mut out = String::from(
        "n,order,rounds,iterations,amplitude,reference_iterations,reference_amplitude,global_peak_rounds,global_peak_amplitude\n",
    );
    for e in entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.16e},{},{},{},{:.16e}",
            e.reference.n,
            e.order.name(),
            e.first_peak.iteration,
            e.iterations(),
            e.first_peak.amplitude,
            e.reference.iterations,
            e.reference.amplitude,
            e.global_peak.iteration,
            e.global_peak.amplitude,
        );
    }
    out
}

/// Runs the table preset and, when `out_dir` is given, writes `table.txt` and `table.csv`.
pub fn run_table(
    sizes: &[usize],
    orders: &[Order],
    max_iterations: Option<usize>,
    out_dir: Option<&Path>,
) -> Result<Vec<TableEntry>> {
    let entries = table_entries(sizes, orders, max_iterations)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let txt = dir.join("table.txt");
        fs::write(&txt, format_table(&entries)).map_err(|e| Error::io(&txt, e))?;
        let csv = dir.join("table.csv");
        fs::write(&csv, table_csv(&entries)).map_err(|e| Error::io(&csv, e))?;
    }
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub label: String,
    pub side: usize,
    pub marked: Vec<Coord>,
    pub first_peak: PeakSummary,
    pub peak: PeakSummary,
    /// Cumulative nominal steps at the first crest.
    pub nominal_steps: u64,
    pub files: Vec<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointOutcome {
    pub point: SweepPoint,
    pub result: std::result::Result<PointSummary, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub out_dir: PathBuf,
    pub order: Order,
    pub outcomes: Vec<PointOutcome>,
}

impl ExperimentReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| o.result.is_err()).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "order {}", self.order);
        let _ = writeln!(
            out,
            "{:<28} {:>8} {:>6} {:>10} {:>9} {:>6} {:>10} {:>10}",
            "point", "n", "round", "prob", "amp", "peak@", "peak_prob", "steps"
        );
        for o in &self.outcomes {
            match &o.result {
                Ok(s) => {
                    let _ = writeln!(
                        out,
                        "{:<28} {:>8} {:>6} {:>10.6} {:>9.6} {:>6} {:>10.6} {:>10}",
                        s.label,
                        s.side * s.side,
                        s.first_peak.iteration,
                        s.first_peak.probability,
                        s.first_peak.amplitude,
                        s.peak.iteration,
                        s.peak.probability,
                        s.nominal_steps,
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "{:<28} error: {e}", o.point.label());
                }
            }
        }
        out
    }
}

fn run_point(cfg: &ExperimentConfig, point: &SweepPoint) -> Result<PointSummary> {
    let mut rc = cfg.run_config(point)?;
    let wants_frames = cfg.emit.snapshots || cfg.emit.heatmaps;
    if wants_frames && rc.snapshot_stride == 0 {
        rc.snapshot_stride = 1;
    }
    if !wants_frames {
        rc.snapshot_stride = 0;
    }
    let trace = run(&rc)?;
    let label = point.label();
    let dir = &cfg.out_dir;
    let mut files = Vec::new();
    if cfg.emit.trace {
        let p = dir.join(format!("{label}_trace.csv"));
        emit_trace_csv(&trace, &p)?;
        files.push(p);
    }
    let style = HeatmapStyle::default();
    for snap in trace.snapshots() {
        if cfg.emit.snapshots {
            let p = dir.join(format!("{label}_snapshot_{:05}.csv", snap.iteration));
            emit_snapshot_csv(&snap.grid, &p)?;
            files.push(p);
        }
        if cfg.emit.heatmaps {
            let p = dir.join(format!("{label}_heatmap_{:05}.ppm", snap.iteration));
            emit_heatmap(&snap.grid, &style, cfg.heatmap_scale, &p)?;
            files.push(p);
        }
    }
    if cfg.emit.partition {
        for (name, part) in [("local", &rc.local), ("dispersion", &rc.dispersion)] {
            let p = dir.join(format!("{label}_{name}_partition.csv"));
            emit_partition_csv(part, &p)?;
            files.push(p);
        }
    }
    let first_peak = trace.first_peak();
    Ok(PointSummary {
        label,
        side: rc.geometry.side(),
        marked: rc.marked.cells().to_vec(),
        first_peak,
        peak: trace.peak(),
        nominal_steps: trace.nominal_steps()[first_peak.iteration - 1],
        files,
    })
}

/// Runs every sweep point in parallel and writes `report.txt`.
///
/// Failures inside a point are recorded in its outcome; the other points
/// still run. Only an unusable output directory aborts the whole run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let violations = cfg.violations();
    if !violations.is_empty() {
        return Err(Error::Config(violations));
    }
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let outcomes = cfg
        .points()
        .into_par_iter()
        .map(|point| {
            let result = run_point(cfg, &point).map_err(|e| e.to_string());
            PointOutcome { point, result }
        })
        .collect();
    let report = ExperimentReport {
        out_dir: dir.clone(),
        order: cfg.order,
        outcomes,
    };
    let path = dir.join("report.txt");
    fs::write(&path, report.render()).map_err(|e| Error::io(&path, e))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::config::parse_config;

    fn config_in(dir: &Path, body: &str) -> ExperimentConfig {
        let mut cfg = parse_config(body).unwrap();
        cfg.out_dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn reference_table_is_powers_of_four() {
        for (k, r) in REFERENCE_TABLE.iter().enumerate() {
            assert_eq!(r.n, 4usize.pow(k as u32 + 2));
        }
        assert!(reference_row(16386).is_none());
    }

    #[test]
    fn sweep_writes_one_trace_per_point() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = config_in(tmp.path(), "sweep_n = 16, 64, 256\nd = 4");
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.outcomes.len(), 3);
        assert_eq!(report.failures(), 0);
        for side in [4, 8, 16] {
            assert!(tmp
                .path()
                .join(format!("L{side}_square_d4_m0_trace.csv"))
                .exists());
        }
        let text = fs::read_to_string(tmp.path().join("report.txt")).unwrap();
        assert_eq!(text.lines().count(), 2 + 3);
    }

    #[test]
    fn heatmap_per_round_with_unit_stride() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = config_in(
            tmp.path(),
            "L = 20\nemit_heatmaps = true\nsnapshot_stride = 1\nmax_iterations = 12",
        );
        let report = run_experiment(&cfg).unwrap();
        let files = &report.outcomes[0].result.as_ref().unwrap().files;
        let rasters = files
            .iter()
            .filter(|p| p.extension().unwrap() == "ppm")
            .count();
        assert_eq!(rasters, 12);
        assert!(tmp
            .path()
            .join("L20_square_d4_m0_heatmap_00012.ppm")
            .exists());
    }

    #[test]
    fn files_are_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let body = "L = 20\nmarked = 5,5; 15,15\nemit_snapshots = true\nemit_heatmaps = true\n\
                    emit_partition = true\nsnapshot_stride = 10";
        run_experiment(&config_in(a.path(), body)).unwrap();
        run_experiment(&config_in(b.path(), body)).unwrap();
        let mut names: Vec<_> = fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(names.len() > 10);
        for name in names {
            assert_eq!(
                fs::read(a.path().join(&name)).unwrap(),
                fs::read(b.path().join(&name)).unwrap(),
                "{name:?}"
            );
        }
    }

    #[test]
    fn unwritable_output_is_an_error() {
        let tmp = tempfile::tempdir().unwrap();
        let blocker = tmp.path().join("file");
        fs::write(&blocker, b"x").unwrap();
        let cfg = config_in(&blocker.join("sub"), "L = 8\nd = 2");
        assert!(matches!(run_experiment(&cfg), Err(Error::Io { .. })));
    }

    #[test]
    fn small_table_rows_match_reference() {
        let entries = table_entries(&[16, 64, 256], &[Order::Ltr, Order::Rtl], None).unwrap();
        assert_eq!(entries.len(), 6);
        for e in entries.iter().filter(|e| e.order == Order::Ltr) {
            assert!(e.amplitude_delta().abs() < 5e-5, "{e:?}");
            assert_eq!(e.iterations(), e.reference.iterations);
        }
        let text = format_table(&entries);
        assert_eq!(text.lines().count(), 7);
        assert!(table_entries(&[20], &[Order::Ltr], None).is_err());
    }
}
