//! The diffuse-and-disperse iteration loop and the global-Grover reference.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{first_peak, peak, PeakSummary};
use crate::error::{Error, Result};
use crate::operators::{apply_global_grover, DiffusionSpec, OracleSpec};
use crate::state::{GridGeometry, GridState, MarkedSet, NORM_TOLERANCE};
use crate::tessellation::{shifted_square_partition, square_partition, Partition};

/// Default tile side for both diffusions.
pub const DEFAULT_TILE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Oracle,
    LocalDiffusion,
    Dispersion,
}

/// Application order of the four operators in one round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Order {
    /// Rightmost factor first: dispersion, oracle, local, oracle.
    Rtl,
    /// Leftmost factor first: oracle, local, oracle, dispersion.
    ///
    /// Default: this reading reproduces the published (amplitude, iteration)
    /// table for n = 16 … 65536.
    #[default]
    Ltr,
}

impl Order {
    pub fn steps(self) -> Vec<Step> {
        use Step::*;
        match self {
            Order::Rtl => vec![Dispersion, Oracle, LocalDiffusion, Oracle],
            Order::Ltr => vec![Oracle, LocalDiffusion, Oracle, Dispersion],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Order::Rtl => "rtl",
            Order::Ltr => "ltr",
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rtl" => Ok(Order::Rtl),
            "ltr" => Ok(Order::Ltr),
            other => Err(format!("unknown order {other:?} (expected rtl or ltr)")),
        }
    }
}

/// Operator sequence for one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    steps: Vec<Step>,
}

impl Schedule {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptySchedule);
        }
        Ok(Schedule { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }
}

impl From<Order> for Schedule {
    fn from(order: Order) -> Self {
        Schedule {
            steps: order.steps(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub geometry: GridGeometry,
    pub marked: MarkedSet,
    pub local: Partition,
    pub dispersion: Partition,
    pub schedule: Schedule,
    pub max_iterations: usize,
    /// Store a snapshot every this many rounds; 0 disables snapshots.
    pub snapshot_stride: usize,
}

/// `⌈4·√n⌉ = 4L` rounds.
pub fn default_horizon(geometry: GridGeometry) -> usize {
    4 * geometry.side()
}

impl RunConfig {
    /// Square tiles of side 4 for the local diffusion, the same tiles shifted
    /// by 2 for the dispersion, left-to-right order, horizon `4L`.
    pub fn new(geometry: GridGeometry, marked: MarkedSet) -> Result<Self> {
        Self::with_tile(geometry, marked, DEFAULT_TILE)
    }

    pub fn with_tile(geometry: GridGeometry, marked: MarkedSet, d: usize) -> Result<Self> {
        Ok(RunConfig {
            geometry,
            marked,
            local: square_partition(geometry, d)?,
            dispersion: shifted_square_partition(geometry, d)?,
            schedule: Order::default().into(),
            max_iterations: default_horizon(geometry),
            snapshot_stride: 0,
        })
    }

    pub fn order(mut self, order: Order) -> Self {
        self.schedule = order.into();
        self
    }
}

/// Nominal robot-step accounting. Setup costs `2·√n`; each schedule step
/// costs 1 for the oracle and the partition's step cost for a diffusion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostCounters {
    pub oracle_calls: u64,
    pub diffusion_applications: u64,
    pub nominal_steps: u64,
}

/// Row-major copy of the amplitudes at one moment.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeGrid {
    side: usize,
    values: Vec<f64>,
}

impl AmplitudeGrid {
    /// Wraps arbitrary row-major values; no normalization is required.
    pub fn new(side: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != side * side {
            return Err(Error::GeometryMismatch {
                expected: side * side,
                found: values.len(),
            });
        }
        Ok(AmplitudeGrid { side, values })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.side + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.side)
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }
}

pub fn snapshot(state: &GridState) -> AmplitudeGrid {
    AmplitudeGrid {
        side: state.geometry().side(),
        values: state.amplitudes().to_vec(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub iteration: usize,
    pub grid: AmplitudeGrid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationTrace {
    cell_count: usize,
    initial_probability: f64,
    probabilities: Vec<f64>,
    item_probabilities: Vec<Vec<f64>>,
    nominal_steps: Vec<u64>,
    snapshots: Vec<Snapshot>,
    counters: CostCounters,
    peak: PeakSummary,
    first_peak: PeakSummary,
}

impl SimulationTrace {
    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    /// Marked probability before the first round.
    pub fn initial_probability(&self) -> f64 {
        self.initial_probability
    }

    /// Marked probability after rounds `1..=len`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability after `iteration` rounds; 0 gives the initial value.
    pub fn probability_at(&self, iteration: usize) -> f64 {
        match iteration {
            0 => self.initial_probability,
            k => self.probabilities[k - 1],
        }
    }

    /// Per-marked-cell probabilities after round `iteration` (1-based).
    pub fn item_probabilities(&self, iteration: usize) -> &[f64] {
        &self.item_probabilities[iteration - 1]
    }

    /// Cumulative nominal steps at the end of each round.
    pub fn nominal_steps(&self) -> &[u64] {
        &self.nominal_steps
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn counters(&self) -> CostCounters {
        self.counters
    }

    pub fn iterations(&self) -> usize {
        self.probabilities.len()
    }

    /// Earliest global maximum over the horizon.
    pub fn peak(&self) -> PeakSummary {
        self.peak
    }

    /// First crest of the marked probability.
    pub fn first_peak(&self) -> PeakSummary {
        self.first_peak
    }
}

struct TraceBuilder {
    cell_count: usize,
    initial_probability: f64,
    probabilities: Vec<f64>,
    item_probabilities: Vec<Vec<f64>>,
    nominal_steps: Vec<u64>,
    snapshots: Vec<Snapshot>,
}

impl TraceBuilder {
    fn finish(self, counters: CostCounters) -> Result<SimulationTrace> {
        let peak = peak(&self.probabilities)?;
        let first_peak = first_peak(&self.probabilities)?;
        Ok(SimulationTrace {
            cell_count: self.cell_count,
            initial_probability: self.initial_probability,
            probabilities: self.probabilities,
            item_probabilities: self.item_probabilities,
            nominal_steps: self.nominal_steps,
            snapshots: self.snapshots,
            counters,
            peak,
            first_peak,
        })
    }
}

fn check_norm(state: &GridState, applications: u64) -> Result<()> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE * (1.0 + applications as f64) {
        return Err(Error::NormDrift {
            norm_sq,
            applications,
        });
    }
    Ok(())
}

fn item_split(state: &GridState, marked: &MarkedSet) -> Vec<f64> {
    marked
        .indices()
        .map(|i| state.amplitudes()[i] * state.amplitudes()[i])
        .collect()
}

fn setup_cost(geometry: GridGeometry) -> u64 {
    2 * geometry.side() as u64
}

/// Runs the tessellated search from the uniform state.
pub fn run(config: &RunConfig) -> Result<SimulationTrace> {
    let geometry = config.geometry;
    if config.marked.geometry() != geometry {
        return Err(Error::GeometryMismatch {
            expected: geometry.side(),
            found: config.marked.geometry().side(),
        });
    }
    if config.max_iterations == 0 {
        return Err(Error::Config(
            vec!["max_iterations must be positive".into()],
        ));
    }
    let oracle = OracleSpec::new(config.marked.clone());
    let local = DiffusionSpec::new(config.local.clone())?;
    let dispersion = DiffusionSpec::new(config.dispersion.clone())?;
    for spec in [&local, &dispersion] {
        if spec.geometry() != geometry {
            return Err(Error::GeometryMismatch {
                expected: geometry.side(),
                found: spec.geometry().side(),
            });
        }
    }

    let mut state = GridState::uniform(geometry);
    let mut counters = CostCounters {
        nominal_steps: setup_cost(geometry),
        ..Default::default()
    };
    let mut trace = TraceBuilder {
        cell_count: geometry.cell_count(),
        initial_probability: state.marked_probability(&config.marked),
        probabilities: Vec::with_capacity(config.max_iterations),
        item_probabilities: Vec::with_capacity(config.max_iterations),
        nominal_steps: Vec::with_capacity(config.max_iterations),
        snapshots: Vec::new(),
    };

    for iteration in 1..=config.max_iterations {
        for step in config.schedule.steps() {
            match step {
                Step::Oracle => {
                    crate::operators::apply_oracle(&mut state, &oracle)?;
                    counters.oracle_calls += 1;
                    counters.nominal_steps += 1;
                }
                Step::LocalDiffusion => {
                    crate::operators::apply_partition_diffusion(&mut state, &local)?;
                    counters.diffusion_applications += 1;
                    counters.nominal_steps += config.local.step_cost();
                }
                Step::Dispersion => {
                    crate::operators::apply_partition_diffusion(&mut state, &dispersion)?;
                    counters.diffusion_applications += 1;
                    counters.nominal_steps += config.dispersion.step_cost();
                }
            }
        }
        check_norm(
            &state,
            counters.oracle_calls + counters.diffusion_applications,
        )?;
        let split = item_split(&state, &config.marked);
        trace.probabilities.push(split.iter().sum());
        trace.item_probabilities.push(split);
        trace.nominal_steps.push(counters.nominal_steps);
        if config.snapshot_stride > 0 && iteration % config.snapshot_stride == 0 {
            trace.snapshots.push(Snapshot {
                iteration,
                grid: snapshot(&state),
            });
        }
    }
    trace.finish(counters)
}

/// Grover's algorithm on the complete graph over `n` items, the first
/// `marked_count` of which are marked. Each round is one oracle call and one
/// inversion about the mean, each charged one nominal step.
pub fn run_grover_reference(
    n: usize,
    marked_count: usize,
    iterations: usize,
) -> Result<SimulationTrace> {
    if marked_count == 0 {
        return Err(Error::EmptyMarked);
    }
    if marked_count >= n {
        return Err(Error::TooManyMarked {
            marked: marked_count,
            n,
        });
    }
    if iterations == 0 {
        return Err(Error::Config(vec!["iterations must be positive".into()]));
    }
    let mut amplitudes = vec![1.0 / (n as f64).sqrt(); n];
    let marked_split = |a: &[f64]| {
        a[..marked_count]
            .iter()
            .map(|x| x * x)
            .collect::<Vec<f64>>()
    };
    let mut trace = TraceBuilder {
        cell_count: n,
        initial_probability: marked_split(&amplitudes).iter().sum(),
        probabilities: Vec::with_capacity(iterations),
        item_probabilities: Vec::with_capacity(iterations),
        nominal_steps: Vec::with_capacity(iterations),
        snapshots: Vec::new(),
    };
    let mut counters = CostCounters::default();
    for _ in 0..iterations {
        amplitudes[..marked_count].iter_mut().for_each(|a| *a = -*a);
        let twice_mean = 2.0 * amplitudes.iter().sum::<f64>() / n as f64;
        amplitudes.iter_mut().for_each(|a| *a = twice_mean - *a);
        counters.oracle_calls += 1;
        counters.diffusion_applications += 1;
        counters.nominal_steps += 2;
        let split = marked_split(&amplitudes);
        trace.probabilities.push(split.iter().sum());
        trace.item_probabilities.push(split);
        trace.nominal_steps.push(counters.nominal_steps);
    }
    trace.finish(counters)
}

/// Grover's algorithm laid out on a grid, so rounds can be snapshotted and
/// drawn next to the tessellated search.
pub fn run_grover_on_grid(
    geometry: GridGeometry,
    marked: &MarkedSet,
    iterations: usize,
    snapshot_stride: usize,
) -> Result<SimulationTrace> {
    if iterations == 0 {
        return Err(Error::Config(vec!["iterations must be positive".into()]));
    }
    let oracle = OracleSpec::new(marked.clone());
    let mut state = GridState::uniform(geometry);
    let mut trace = TraceBuilder {
        cell_count: geometry.cell_count(),
        initial_probability: state.marked_probability(marked),
        probabilities: Vec::with_capacity(iterations),
        item_probabilities: Vec::with_capacity(iterations),
        nominal_steps: Vec::with_capacity(iterations),
        snapshots: Vec::new(),
    };
    let mut counters = CostCounters::default();
    for iteration in 1..=iterations {
        crate::operators::apply_oracle(&mut state, &oracle)?;
        apply_global_grover(&mut state);
        counters.oracle_calls += 1;
        counters.diffusion_applications += 1;
        counters.nominal_steps += 2;
        check_norm(&state, 2 * iteration as u64)?;
        let split = item_split(&state, marked);
        trace.probabilities.push(split.iter().sum());
        trace.item_probabilities.push(split);
        trace.nominal_steps.push(counters.nominal_steps);
        if snapshot_stride > 0 && iteration % snapshot_stride == 0 {
            trace.snapshots.push(Snapshot {
                iteration,
                grid: snapshot(&state),
            });
        }
    }
    trace.finish(counters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::apply_oracle;
    use crate::tessellation::cross_partition;

    fn geom(side: usize) -> GridGeometry {
        GridGeometry::new(side).unwrap()
    }

    fn closed_form(n: usize, m: usize, k: usize) -> f64 {
        let theta = (m as f64 / n as f64).sqrt().asin();
        ((2 * k + 1) as f64 * theta).sin().powi(2)
    }

    #[test]
    fn order_steps() {
        use Step::*;
        assert_eq!(
            Order::Rtl.steps(),
            vec![Dispersion, Oracle, LocalDiffusion, Oracle]
        );
        assert_eq!(
            Order::Ltr.steps(),
            vec![Oracle, LocalDiffusion, Oracle, Dispersion]
        );
        assert_eq!("rtl".parse::<Order>().unwrap(), Order::Rtl);
        assert!("up".parse::<Order>().is_err());
        assert!(Schedule::new(vec![]).is_err());
    }

    #[test]
    fn n16_reproduces_first_row() {
        let g = geom(4);
        let cfg = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        let trace = run(&cfg).unwrap();
        let p = trace.first_peak();
        assert_eq!(p.iteration, 1);
        assert!((p.amplitude - 0.9531).abs() < 5e-5, "{}", p.amplitude);
    }

    #[test]
    fn n400_single_marked_near_79_percent() {
        let g = geom(20);
        let trace = run(&RunConfig::new(g, MarkedSet::default_for(g)).unwrap()).unwrap();
        let p = trace.first_peak();
        assert!((p.probability - 0.79).abs() < 0.01, "{}", p.probability);
    }

    #[test]
    fn starts_uniform() {
        for side in [4, 8, 20] {
            let g = geom(side);
            let trace = run(&RunConfig::new(g, MarkedSet::default_for(g)).unwrap()).unwrap();
            assert!((trace.initial_probability() - 1.0 / g.cell_count() as f64).abs() < 1e-15);
            assert_eq!(trace.probability_at(0), trace.initial_probability());
            assert_eq!(trace.iterations(), 4 * side);
        }
    }

    #[test]
    fn cost_counters_follow_step_accounting() {
        let g = geom(8);
        let mut cfg = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        cfg.max_iterations = 10;
        let trace = run(&cfg).unwrap();
        let c = trace.counters();
        assert_eq!(c.oracle_calls, 20);
        assert_eq!(c.diffusion_applications, 20);
        // 2·√64 setup + 10 · (1 + 4 + 1 + 4)
        assert_eq!(c.nominal_steps, 16 + 100);
        assert_eq!(trace.nominal_steps()[0], 26);

        let g = geom(10);
        assert!(matches!(
            RunConfig::new(g, MarkedSet::default_for(g)),
            Err(Error::NotDivisible { .. })
        ));
        let cross = cross_partition(g).unwrap();
        let run_cfg = RunConfig {
            geometry: g,
            marked: MarkedSet::default_for(g),
            dispersion: cross.translate(2, 2),
            local: cross,
            schedule: Order::Ltr.into(),
            max_iterations: 3,
            snapshot_stride: 0,
        };
        assert_eq!(run(&run_cfg).unwrap().counters().nominal_steps, 20 + 3 * 4);
    }

    #[test]
    fn snapshots_do_not_perturb_trace() {
        let g = geom(20);
        let base = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        let mut with = base.clone();
        with.snapshot_stride = 3;
        let a = run(&base).unwrap();
        let b = run(&with).unwrap();
        assert_eq!(a.probabilities(), b.probabilities());
        assert_eq!(b.snapshots().len(), 80 / 3);
        assert_eq!(b.snapshots()[0].iteration, 3);
        assert!(a.snapshots().is_empty());
    }

    #[test]
    fn snapshot_examples() {
        let g = geom(2);
        let mut s = GridState::uniform(g);
        assert_eq!(
            snapshot(&s).to_nested(),
            vec![vec![0.5, 0.5], vec![0.5, 0.5]]
        );
        apply_oracle(
            &mut s,
            &OracleSpec::new(MarkedSet::single(g, 0, 0).unwrap()),
        )
        .unwrap();
        assert_eq!(
            snapshot(&s).to_nested(),
            vec![vec![-0.5, 0.5], vec![0.5, 0.5]]
        );
    }

    #[test]
    fn deterministic_runs() {
        let g = geom(32);
        let cfg = RunConfig::new(g, MarkedSet::new(g, [(3, 9), (20, 21)]).unwrap()).unwrap();
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }

    #[test]
    fn rejects_invalid_configs() {
        let g = geom(8);
        let mut cfg = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        cfg.max_iterations = 0;
        assert!(run(&cfg).is_err());

        let mut cfg = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        cfg.marked = MarkedSet::default_for(geom(4));
        assert!(matches!(run(&cfg), Err(Error::GeometryMismatch { .. })));

        let mut cfg = RunConfig::new(g, MarkedSet::default_for(g)).unwrap();
        let mut groups = cfg.local.groups().to_vec();
        groups.pop();
        cfg.local = Partition::custom(g, groups);
        assert!(matches!(run(&cfg), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn grover_reference_closed_form() {
        for (n, m) in [(4, 1), (400, 1), (400, 2), (1024, 3)] {
            let trace = run_grover_reference(n, m, 40).unwrap();
            assert!((trace.probability_at(0) - m as f64 / n as f64).abs() < 1e-15);
            for k in 0..=40 {
                assert!((trace.probability_at(k) - closed_form(n, m, k)).abs() < 1e-9);
            }
        }
        let t = run_grover_reference(4, 1, 1).unwrap();
        assert!((t.probability_at(1) - 1.0).abs() < 1e-12);
        assert!(matches!(
            run_grover_reference(4, 4, 1),
            Err(Error::TooManyMarked { .. })
        ));
        assert!(run_grover_reference(4, 0, 1).is_err());
    }

    #[test]
    fn grover_on_grid_matches_flat() {
        let g = geom(20);
        let marked = MarkedSet::single(g, 11, 11).unwrap();
        let grid = run_grover_on_grid(g, &marked, 30, 5).unwrap();
        let flat = run_grover_reference(400, 1, 30).unwrap();
        for k in 1..=30 {
            assert!((grid.probability_at(k) - flat.probability_at(k)).abs() < 1e-12);
        }
        assert_eq!(grid.snapshots().len(), 6);
        assert_eq!(grid.peak().iteration, 15);
    }
}
