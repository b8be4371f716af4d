use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multicut::generate::{grid_graph, random_graph, GridSpec};
use multicut::graph::parse_instance;
use multicut::oracle::brute_force_optimum;
use multicut::report::{write_bench_csv, BenchRow, RunReport, WallTimes};
use multicut::{solve, Mode, SolverConfig, WeightedGraph};

#[derive(Parser)]
#[command(
    name = "multicut",
    version,
    about = "Primal-dual minimum-cost multicut solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write a JSON report.
    Solve(SolveArgs),
    /// Compute a dual lower bound only (mode D).
    Bound(SolveArgs),
    /// Write a synthetic instance.
    Generate(GenerateArgs),
    /// Run a mode matrix over a set of instances and write CSV.
    Bench(BenchArgs),
    /// Exact optimum by enumeration (at most 12 nodes).
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct SolverFlags {
    #[arg(long, default_value_t = 5)]
    mp_iterations: usize,
    /// Defaults to 5, or 7 in mode PD+.
    #[arg(long)]
    max_cycle_length: Option<usize>,
    #[arg(long, default_value_t = 100)]
    max_rounds: usize,
    /// Separation rounds in mode D.
    #[arg(long, default_value_t = 1)]
    separation_rounds: usize,
    #[arg(long, default_value_t = 0.1)]
    matching_switch_fraction: f64,
    /// Perturb matching proposals with the seed.
    #[arg(long)]
    matching_jitter: bool,
    /// Worker threads (default: machine parallelism).
    #[arg(long, env = "MULTICUT_THREADS")]
    threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverFlags {
    fn config(&self, mode: Mode) -> SolverConfig {
        let defaults = SolverConfig::new(mode);
        let threads = match self.threads {
            Some(t) if t > 0 => t,
            _ => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        SolverConfig {
            mp_iterations: self.mp_iterations,
            max_cycle_length: self.max_cycle_length.unwrap_or(defaults.max_cycle_length),
            max_rounds: self.max_rounds,
            separation_rounds: self.separation_rounds,
            matching_switch_fraction: self.matching_switch_fraction,
            matching_jitter: self.matching_jitter,
            seed: self.seed,
            threads,
            ..defaults
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Report destination (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "PD")]
    mode: Mode,
    /// Zero all wall-clock fields so reports of equal runs are identical.
    #[arg(long)]
    omit_timings: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Random,
    Grid,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long = "type", value_enum)]
    kind: GraphKind,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(short = 'n', long, default_value_t = 10)]
    nodes: usize,
    #[arg(short = 'p', long, default_value_t = 0.5)]
    probability: f64,
    #[arg(long, default_value_t = 10)]
    height: usize,
    #[arg(long, default_value_t = 10)]
    width: usize,
    /// Long-range edge stride; 0 for none.
    #[arg(long, default_value_t = 0)]
    stride: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Glob pattern of instance files.
    #[arg(short, long)]
    input: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "P,PD")]
    modes: Vec<Mode>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a, None),
        Command::Bound(a) => cmd_solve(a, Some(Mode::Dual)),
        Command::Generate(a) => cmd_generate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn read_instance(path: &Path) -> CliResult<WeightedGraph> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: Option<&Path>, text: &[u8]) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text).map_err(|e| e.to_string()),
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn cmd_solve(args: SolveArgs, force: Option<Mode>) -> CliResult<()> {
    let total = Instant::now();
    let cfg = args.solver.config(force.unwrap_or(args.mode));
    cfg.validate().map_err(|e| e.to_string())?;
    let g = read_instance(&args.input)?;
    let parse = ms(total);
    let start = Instant::now();
    let sol = solve(&g, &cfg).map_err(|e| e.to_string())?;
    let times = WallTimes {
        parse,
        solve: ms(start),
        total: ms(total),
    };
    let mut report = RunReport::new(args.input.display().to_string(), &cfg, &sol, times);
    if args.omit_timings {
        report = report.without_timings();
    }
    let mut text = report.to_json();
    text.push('\n');
    emit(args.output.as_deref(), text.as_bytes())
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    let g = match args.kind {
        GraphKind::Random => random_graph(args.nodes, args.probability, args.seed),
        GraphKind::Grid => {
            let spec = GridSpec {
                stride: args.stride,
                ..GridSpec::new(args.height, args.width)
            };
            grid_graph(&spec, args.seed)
        }
    }
    .map_err(|e| e.to_string())?;
    emit(args.output.as_deref(), g.to_text().as_bytes())
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let mut paths: Vec<PathBuf> = glob::glob(&args.input)
        .map_err(|e| format!("bad pattern `{}`: {e}", args.input))?
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    paths.sort();
    if paths.is_empty() {
        return Err(format!("no files match `{}`", args.input));
    }
    if args.modes.is_empty() {
        return Err("no modes given".into());
    }
    // read everything up front so a bad file produces no output at all
    let instances = paths
        .iter()
        .map(|p| read_instance(p).map(|g| (p.display().to_string(), g)))
        .collect::<CliResult<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (name, g) in &instances {
        for &mode in &args.modes {
            let cfg = args.solver.config(mode);
            let start = Instant::now();
            let sol = solve(g, &cfg).map_err(|e| format!("{name}: {e}"))?;
            rows.push(BenchRow {
                instance: name.clone(),
                mode,
                primal_cost: sol.primal_cost,
                lower_bound: sol.lower_bound(),
                time_ms: ms(start),
            });
        }
    }
    let mut buf = Vec::new();
    write_bench_csv(&mut buf, &rows).map_err(|e| e.to_string())?;
    emit(args.output.as_deref(), &buf)
}

fn cmd_oracle(args: OracleArgs) -> CliResult<()> {
    let g = read_instance(&args.input)?;
    let r = brute_force_optimum(&g).map_err(|e| e.to_string())?;
    let out = json!({
        "optimum": r.optimum_cost,
        "labeling": r.optimum_labeling.cluster_of(),
    });
    emit(args.output.as_deref(), format!("{out}\n").as_bytes())
}
