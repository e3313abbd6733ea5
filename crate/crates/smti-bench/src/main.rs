//! Command-line benchmarks for the smti local-search solver: solve single
//! instance files, sweep the generator grid, record quality-versus-steps
//! trajectories, generate instance corpora, and enumerate exact ground truth
//! for small instances.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use smti::generator::{self, GenParams};
use smti::instance::Instance;
use smti::localsearch::{search, SearchConfig, Variant};
use smti::oracle;
use smti_bench::sweep::{run_sweep, write_cells_csv, write_runs_csv, SweepSpec};
use smti_bench::trajectory::{run_trajectory, write_trajectory_csv, TrajectorySpec};

#[derive(Parser)]
#[command(name = "smti-bench", version, about = "Benchmarks for the smti local-search solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance file and print the best marriage found
    Solve(SolveArgs),
    /// Run the search across a parameter grid and write per-cell statistics
    Sweep(SweepArgs),
    /// Record solution quality against the step count for one cell
    Trajectory(TrajectoryArgs),
    /// Write generated instance files for a parameter grid
    Gen(GenArgs),
    /// Exhaustively enumerate the stable marriages of small instance files
    Oracle(OracleArgs),
}

/// Search settings shared by the solving subcommands.
#[derive(Args)]
struct SearchArgs {
    /// Neighborhood variant: "lti" or "ltiu"
    #[arg(long, default_value = "ltiu", value_parser = parse_variant)]
    variant: Variant,
    /// Step budget per run
    #[arg(long, default_value_t = 50_000)]
    max_steps: usize,
    /// Random-walk probability
    #[arg(long, default_value_t = 0.2)]
    walk_prob: f64,
    /// Base seed; everything derives from it deterministically
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file
    input: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Output form for the marriage: "row" or "match"
    #[arg(long, default_value = "row", value_parser = ["row", "match"])]
    format: String,
    /// Also write the marriage to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance size
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    search: SearchArgs,
    /// Comma-separated deletion probabilities (default: 0.1..0.8)
    #[arg(long)]
    p1: Option<String>,
    /// Comma-separated tie probabilities (default: 0.0..1.0)
    #[arg(long)]
    p2: Option<String>,
    /// Instances per cell
    #[arg(long, default_value_t = 100)]
    per_cell: usize,
    /// Search runs per instance
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Per-cell CSV output path
    #[arg(long)]
    out: PathBuf,
    /// Optional per-run CSV output path
    #[arg(long)]
    runs_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p1: f64,
    #[arg(long)]
    p2: f64,
    #[command(flatten)]
    search: SearchArgs,
    /// Instances for the cell
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// Search runs per instance
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Steps between samples
    #[arg(long, default_value_t = 500)]
    stride: usize,
    /// Trajectory CSV output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Instance size
    #[arg(long)]
    n: usize,
    /// Comma-separated deletion probabilities (default: 0.1..0.8)
    #[arg(long)]
    p1: Option<String>,
    /// Comma-separated tie probabilities (default: 0.0..1.0)
    #[arg(long)]
    p2: Option<String>,
    /// Instances per cell
    #[arg(long, default_value_t = 100)]
    per_cell: usize,
    /// Base seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory the instance files are written into
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance files
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Largest instance size to enumerate
    #[arg(long, default_value_t = oracle::DEFAULT_SIZE_CAP)]
    size_cap: usize,
    /// Optional CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(args) => solve(args),
        Cmd::Sweep(args) => sweep(args).map(|()| ExitCode::SUCCESS),
        Cmd::Trajectory(args) => trajectory(args).map(|()| ExitCode::SUCCESS),
        Cmd::Gen(args) => generate_files(args).map(|()| ExitCode::SUCCESS),
        Cmd::Oracle(args) => oracle_files(args).map(|()| ExitCode::SUCCESS),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.input)?;
    let cfg = SearchConfig {
        variant: args.search.variant,
        max_steps: args.search.max_steps,
        walk_probability: args.search.walk_prob,
        seed: args.search.seed,
        ..Default::default()
    };
    let result = search(&inst, &cfg);

    let rendered = match args.format.as_str() {
        "match" => result.best.to_block(),
        _ => format!("marriage: {}\n", result.best.to_row()),
    };
    print!("{rendered}");
    println!("stable: {}", result.stable);
    println!("perfect: {}", result.perfect);
    println!("size: {}", result.best.size());
    println!("singles: {}", result.best.singles_per_side());
    println!("nbp: {}", result.best_eval.nbp);
    println!("ns: {}", result.best_eval.ns);
    println!("f: {}", result.best_eval.f());
    println!("steps: {}", result.steps_taken);
    println!("restarts: {}", result.restarts);
    println!("walks: {}", result.walks);
    println!("distinct_stable: {}", result.distinct_stable);
    println!("wall_ms: {}", result.wall_time.as_secs_f64() * 1e3);

    if let Some(out) = &args.out {
        let body = match args.format.as_str() {
            "match" => result.best.to_block(),
            _ => format!("{}\n", result.best.to_row()),
        };
        fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
    }

    // Exit 0 when the best marriage is weakly stable, 3 when it is not.
    Ok(if result.stable { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

fn parse_probs(arg: &Option<String>, default: &[f64]) -> Result<Vec<f64>> {
    let Some(s) = arg else {
        return Ok(default.to_vec());
    };
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let v: f64 = tok.parse().with_context(|| format!("bad probability {tok:?}"))?;
        if !(0.0..=1.0).contains(&v) {
            bail!("probability {v} outside [0, 1]");
        }
        out.push(v);
    }
    if out.is_empty() {
        bail!("empty probability list");
    }
    Ok(out)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let spec = SweepSpec {
        n: args.n,
        variant: args.search.variant,
        p1_values: parse_probs(&args.p1, &generator::GRID_P1)?,
        p2_values: parse_probs(&args.p2, &generator::GRID_P2)?,
        per_cell: args.per_cell,
        runs_per_instance: args.runs,
        max_steps: args.search.max_steps,
        walk_probability: args.search.walk_prob,
        base_seed: args.search.seed,
    };
    let report = run_sweep(&spec);

    let mut out = Vec::new();
    write_cells_csv(&spec, &report, &mut out)?;
    fs::write(&args.out, out).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = &args.runs_out {
        let mut out = Vec::new();
        write_runs_csv(&spec, &report, &mut out)?;
        fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "sweep: {} cells, {} runs -> {}",
        report.cells.len(),
        report.records.len(),
        args.out.display()
    );
    Ok(())
}

fn trajectory(args: TrajectoryArgs) -> Result<()> {
    let spec = TrajectorySpec {
        n: args.n,
        variant: args.search.variant,
        p1: args.p1,
        p2: args.p2,
        instances: args.instances,
        runs_per_instance: args.runs,
        max_steps: args.search.max_steps,
        stride: args.stride,
        walk_probability: args.search.walk_prob,
        base_seed: args.search.seed,
    };
    let report = run_trajectory(&spec);
    let mut out = Vec::new();
    write_trajectory_csv(&spec, &report, &mut out)?;
    fs::write(&args.out, out).with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "trajectory: {} points over {} runs -> {}",
        report.points.len(),
        report.runs,
        args.out.display()
    );
    Ok(())
}

fn generate_files(args: GenArgs) -> Result<()> {
    let p1s = parse_probs(&args.p1, &generator::GRID_P1)?;
    let p2s = parse_probs(&args.p2, &generator::GRID_P2)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut written = 0usize;
    for &p1 in &p1s {
        for &p2 in &p2s {
            for k in 0..args.per_cell {
                let seed = generator::instance_seed(args.seed, args.n, p1, p2, k);
                let inst = generator::generate(&GenParams::new(args.n, p1, p2, seed))
                    .with_context(|| format!("generating cell ({p1}, {p2}) instance {k}"))?;
                let name = format!("smti_n{}_p1{}_p2{}_i{}.txt", args.n, p1, p2, k);
                let path = args.out_dir.join(name);
                fs::write(&path, inst.to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
                written += 1;
            }
        }
    }
    println!("gen: wrote {written} instances to {}", args.out_dir.display());
    Ok(())
}

fn oracle_files(args: OracleArgs) -> Result<()> {
    let mut csv: Vec<u8> = Vec::new();
    writeln!(csv, "# smti-bench oracle")?;
    writeln!(csv, "# size_cap={}", args.size_cap)?;
    writeln!(csv, "file,n,stable_count,max_stable_size,count_by_size")?;
    for path in &args.inputs {
        let inst = read_instance(path)?;
        let report = oracle::enumerate_stable(&inst, args.size_cap)
            .with_context(|| format!("enumerating {}", path.display()))?;
        let sizes = report
            .count_by_size
            .iter()
            .map(|(size, count)| format!("{size}:{count}"))
            .collect::<Vec<_>>()
            .join(";");
        println!(
            "{}: n={} stable_count={} max_stable_size={} sizes=[{}]",
            path.display(),
            inst.n(),
            report.all_stable.len(),
            report.max_size,
            sizes
        );
        writeln!(
            csv,
            "{},{},{},{},{}",
            path.display(),
            inst.n(),
            report.all_stable.len(),
            report.max_size,
            sizes
        )?;
    }
    if let Some(out) = &args.out {
        fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}
