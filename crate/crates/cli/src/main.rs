use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gridsearch::io::config::{parse_config, ExperimentConfig, Tessellation};
use gridsearch::io::experiment::{format_table, run_experiment, run_table, DEFAULT_TABLE_SIZES};
use gridsearch::io::output::emit_trace_csv;
use gridsearch::tessellation::validate_partition;
use gridsearch::{run_grover_reference, GridGeometry, Order};

#[derive(Parser)]
#[command(
    name = "gridsearch",
    version,
    about = "Tessellated quantum search on a cyclic grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Output directory (overrides `out` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Operator application order
    #[arg(long, value_parser = parse_order)]
    order: Option<Order>,
    /// Snapshot every k rounds and write snapshot CSVs
    #[arg(long, value_name = "K")]
    snapshots: Option<usize>,
    /// Number of rounds to simulate
    #[arg(long, value_name = "K")]
    max_iters: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single configuration
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run every combination of the config's sweep lists
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare against the published single-marked table
    Table {
        /// Grid sizes n (perfect squares from the table)
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_TABLE_SIZES.to_vec())]
        sizes: Vec<usize>,
        /// Only this order (both are reported by default)
        #[arg(long, value_parser = parse_order)]
        order: Option<Order>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_name = "K")]
        max_iters: Option<usize>,
    },
    /// Grover's algorithm on the complete graph
    Grover {
        #[arg(long)]
        n: usize,
        /// Number of marked items
        #[arg(long, default_value_t = 1)]
        marked: usize,
        /// Rounds; defaults to twice the optimal count plus one
        #[arg(long, value_name = "K")]
        max_iters: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check partitions without simulating
    Validate {
        #[arg(long, conflicts_with_all = ["side", "tile", "tessellation"])]
        config: Option<PathBuf>,
        /// Grid side L
        #[arg(long = "side", short = 'L')]
        side: Option<usize>,
        /// Tile parameter d
        #[arg(long = "tile", short = 'd', default_value_t = 4)]
        tile: usize,
        #[arg(long, default_value = "square")]
        tessellation: Tessellation,
        /// Write the local and dispersion partitions as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_order(s: &str) -> std::result::Result<Order, String> {
    s.parse()
}

fn load(path: &Path, o: &Overrides) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(out) = &o.out {
        cfg.out_dir = out.clone();
    }
    if let Some(order) = o.order {
        cfg.order = order;
    }
    if let Some(k) = o.snapshots {
        cfg.snapshot_stride = k;
        cfg.emit.snapshots = k > 0;
    }
    if let Some(k) = o.max_iters {
        cfg.max_iterations = Some(k);
    }
    Ok(cfg)
}

fn experiment(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let report = run_experiment(cfg)?;
    print!("{}", report.render());
    println!("wrote {}", report.out_dir.join("report.txt").display());
    Ok(if report.failures() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn validate(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<bool> {
    let mut all_ok = true;
    for point in cfg.points() {
        let g = GridGeometry::new(point.side)?;
        let (local, dispersion) =
            point
                .tessellation
                .partitions(g, point.tile, cfg.dispersion_shift)?;
        for (name, p) in [("local", &local), ("dispersion", &dispersion)] {
            match validate_partition(p) {
                Ok(()) => println!("{} {name}: ok ({} groups)", point.label(), p.groups().len()),
                Err(report) => {
                    all_ok = false;
                    println!("{} {name}: invalid {report:?}", point.label());
                }
            }
            if let Some(dir) = out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("{}_{name}_partition.csv", point.label()));
                gridsearch::io::output::emit_partition_csv(p, &path)?;
            }
        }
    }
    Ok(all_ok)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let points = cfg.points().len();
            if points != 1 {
                bail!("`run` takes a single configuration but this one expands to {points} points; use `sweep`");
            }
            experiment(&cfg)
        }
        Command::Sweep { config, overrides } => experiment(&load(&config, &overrides)?),
        Command::Table {
            sizes,
            order,
            out,
            max_iters,
        } => {
            let orders = match order {
                Some(o) => vec![o],
                None => vec![Order::Ltr, Order::Rtl],
            };
            let entries = run_table(&sizes, &orders, max_iters, out.as_deref())?;
            print!("{}", format_table(&entries));
            if let Some(dir) = out {
                println!("wrote {}", dir.join("table.txt").display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Grover {
            n,
            marked,
            max_iters,
            out,
        } => {
            let rounds = max_iters.unwrap_or_else(|| {
                let ideal = std::f64::consts::FRAC_PI_4 * (n as f64 / marked.max(1) as f64).sqrt();
                2 * ideal.ceil() as usize + 1
            });
            let trace = run_grover_reference(n, marked, rounds)?;
            let p = trace.peak();
            println!(
                "n={n} m={marked}: peak probability {:.6} (amplitude {:.6}) at round {}",
                p.probability, p.amplitude, p.iteration
            );
            if let Some(dir) = out {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("grover_n{n}_m{marked}_trace.csv"));
                emit_trace_csv(&trace, &path)?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            config,
            side,
            tile,
            tessellation,
            out,
        } => {
            let cfg = match (config, side) {
                (Some(path), _) => load(&path, &Overrides::none())?,
                (None, Some(side)) => {
                    let text = format!("L = {side}\nd = {tile}\ntessellation = {tessellation}");
                    parse_config(&text)?
                }
                (None, None) => bail!("give --config or --side"),
            };
            Ok(if validate(&cfg, out.as_deref())? {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

impl Overrides {
    fn none() -> Self {
        Overrides {
            out: None,
            order: None,
            snapshots: None,
            max_iters: None,
        }
    }
}
