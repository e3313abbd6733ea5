//! Parameter sweeps: run the search over generated instances for every
//! `(p1, p2)` cell and aggregate per-cell statistics.

use std::io::{self, Write};

use rayon::prelude::*;

use smti::generator::{self, GenParams};
use smti::localsearch::{search, SearchConfig, Variant};
use smti::seed;

/// What to run: the grid, the budget per run, and the seeding.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub n: usize,
    pub variant: Variant,
    pub p1_values: Vec<f64>,
    pub p2_values: Vec<f64>,
    /// Instances generated per cell.
    pub per_cell: usize,
    /// Search runs per instance, each with its own derived seed.
    pub runs_per_instance: usize,
    pub max_steps: usize,
    pub walk_probability: f64,
    pub base_seed: u64,
}

impl SweepSpec {
    /// The full benchmark grid at its default sizes: every `(p1, p2)`
    /// combination, 100 instances per cell, one run each.
    pub fn grid(n: usize, variant: Variant, base_seed: u64) -> SweepSpec {
        SweepSpec {
            n,
            variant,
            p1_values: generator::GRID_P1.to_vec(),
            p2_values: generator::GRID_P2.to_vec(),
            per_cell: 100,
            runs_per_instance: 1,
            max_steps: 50_000,
            walk_probability: 0.2,
            base_seed,
        }
    }
}

/// Seed of run `run_idx` on the instance drawn with `instance_seed`.
pub fn run_seed(instance_seed: u64, run_idx: usize) -> u64 {
    seed::mix(instance_seed, &[run_idx as u64])
}

/// One search run's outcome.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub instance_idx: usize,
    pub run_idx: usize,
    pub seed: u64,
    pub stable: bool,
    pub perfect: bool,
    pub best_size: usize,
    /// Singles per side of the best marriage, `n - best_size`.
    pub singles: usize,
    pub best_nbp: usize,
    pub steps: usize,
    pub restarts: usize,
    pub walks: usize,
    pub distinct_stable: usize,
    pub wall_ms: f64,
}

/// Aggregates over all runs of one `(p1, p2)` cell.
#[derive(Clone, Debug)]
pub struct CellStats {
    pub p1: f64,
    pub p2: f64,
    /// Instances that generated successfully.
    pub instances: usize,
    /// Instances abandoned at the generator's rejection cap.
    pub gen_failures: usize,
    pub runs: usize,
    pub stable_rate: f64,
    pub perfect_rate: f64,
    pub avg_singles: f64,
    pub avg_nbp: f64,
    pub avg_steps: f64,
    pub avg_distinct_stable: f64,
    pub avg_wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    /// Every run in grid order: `p1` outermost, then `p2`, instance, run.
    pub records: Vec<RunRecord>,
    pub cells: Vec<CellStats>,
}

/// Run the whole sweep. Work is distributed across threads per instance;
/// the report order does not depend on the thread count.
pub fn run_sweep(spec: &SweepSpec) -> SweepReport {
    let cells_coords: Vec<(f64, f64)> = spec
        .p1_values
        .iter()
        .flat_map(|&p1| spec.p2_values.iter().map(move |&p2| (p1, p2)))
        .collect();
    let tasks: Vec<(f64, f64, usize)> = cells_coords
        .iter()
        .flat_map(|&(p1, p2)| (0..spec.per_cell).map(move |k| (p1, p2, k)))
        .collect();

    let outcomes: Vec<(Vec<RunRecord>, bool)> =
        tasks.par_iter().map(|&(p1, p2, k)| run_instance(spec, p1, p2, k)).collect();

    let mut records = Vec::with_capacity(tasks.len() * spec.runs_per_instance);
    let mut cells = Vec::with_capacity(cells_coords.len());
    for (ci, &(p1, p2)) in cells_coords.iter().enumerate() {
        let items = &outcomes[ci * spec.per_cell..(ci + 1) * spec.per_cell];
        let gen_failures = items.iter().filter(|(_, failed)| *failed).count();
        let cell_records: Vec<&RunRecord> = items.iter().flat_map(|(r, _)| r).collect();
        cells.push(cell_stats(p1, p2, spec.per_cell, gen_failures, &cell_records));
        records.extend(items.iter().flat_map(|(r, _)| r.iter().cloned()));
    }
    SweepReport { records, cells }
}

fn run_instance(spec: &SweepSpec, p1: f64, p2: f64, k: usize) -> (Vec<RunRecord>, bool) {
    let instance_seed = generator::instance_seed(spec.base_seed, spec.n, p1, p2, k);
    let inst = match generator::generate(&GenParams::new(spec.n, p1, p2, instance_seed)) {
        Ok(inst) => inst,
        Err(_) => return (Vec::new(), true),
    };
    let mut records = Vec::with_capacity(spec.runs_per_instance);
    for r in 0..spec.runs_per_instance {
        let cfg = SearchConfig {
            variant: spec.variant,
            max_steps: spec.max_steps,
            walk_probability: spec.walk_probability,
            seed: run_seed(instance_seed, r),
            ..Default::default()
        };
        let result = search(&inst, &cfg);
        records.push(RunRecord {
            n: spec.n,
            p1,
            p2,
            instance_idx: k,
            run_idx: r,
            seed: cfg.seed,
            stable: result.stable,
            perfect: result.perfect,
            best_size: result.best.size(),
            singles: result.best.singles_per_side(),
            best_nbp: result.best_eval.nbp,
            steps: result.steps_taken,
            restarts: result.restarts,
            walks: result.walks,
            distinct_stable: result.distinct_stable,
            wall_ms: result.wall_time.as_secs_f64() * 1e3,
        });
    }
    (records, false)
}

fn cell_stats(
    p1: f64,
    p2: f64,
    per_cell: usize,
    gen_failures: usize,
    records: &[&RunRecord],
) -> CellStats {
    let runs = records.len();
    let mean = |f: &dyn Fn(&RunRecord) -> f64| {
        if runs == 0 {
            0.0
        } else {
            records.iter().map(|r| f(r)).sum::<f64>() / runs as f64
        }
    };
    CellStats {
        p1,
        p2,
        instances: per_cell - gen_failures,
        gen_failures,
        runs,
        stable_rate: mean(&|r| f64::from(r.stable)),
        perfect_rate: mean(&|r| f64::from(r.perfect)),
        avg_singles: mean(&|r| r.singles as f64),
        avg_nbp: mean(&|r| r.best_nbp as f64),
        avg_steps: mean(&|r| r.steps as f64),
        avg_distinct_stable: mean(&|r| r.distinct_stable as f64),
        avg_wall_ms: mean(&|r| r.wall_ms),
    }
}

/// Per-cell CSV: `#` metadata lines, a header, one line per cell.
/// The wall-clock column comes last so byte comparisons can drop it.
pub fn write_cells_csv(
    spec: &SweepSpec,
    report: &SweepReport,
    w: &mut impl Write,
) -> io::Result<()> {
    writeln!(w, "# smti-bench sweep")?;
    writeln!(
        w,
        "# n={} variant={} per_cell={} runs_per_instance={} max_steps={} walk_prob={} base_seed={}",
        spec.n,
        spec.variant,
        spec.per_cell,
        spec.runs_per_instance,
        spec.max_steps,
        spec.walk_probability,
        spec.base_seed
    )?;
    writeln!(
        w,
        "n,variant,p1,p2,instances,gen_failures,runs,stable_rate,perfect_rate,avg_singles,\
         avg_nbp,avg_steps,avg_distinct_stable,avg_wall_ms"
    )?;
    for c in &report.cells {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            spec.n,
            spec.variant,
            c.p1,
            c.p2,
            c.instances,
            c.gen_failures,
            c.runs,
            c.stable_rate,
            c.perfect_rate,
            c.avg_singles,
            c.avg_nbp,
            c.avg_steps,
            c.avg_distinct_stable,
            c.avg_wall_ms
        )?;
    }
    Ok(())
}

/// Per-run CSV, same conventions as [`write_cells_csv`].
pub fn write_runs_csv(
    spec: &SweepSpec,
    report: &SweepReport,
    w: &mut impl Write,
) -> io::Result<()> {
    writeln!(w, "# smti-bench sweep runs")?;
    writeln!(
        w,
        "# n={} variant={} per_cell={} runs_per_instance={} max_steps={} walk_prob={} base_seed={}",
        spec.n,
        spec.variant,
        spec.per_cell,
        spec.runs_per_instance,
        spec.max_steps,
        spec.walk_probability,
        spec.base_seed
    )?;
    writeln!(
        w,
        "n,variant,p1,p2,instance,run,seed,stable,perfect,size,singles,nbp,steps,restarts,\
         walks,distinct_stable,wall_ms"
    )?;
    for r in &report.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            spec.variant,
            r.p1,
            r.p2,
            r.instance_idx,
            r.run_idx,
            r.seed,
            u8::from(r.stable),
            u8::from(r.perfect),
            r.best_size,
            r.singles,
            r.best_nbp,
            r.steps,
            r.restarts,
            r.walks,
            r.distinct_stable,
            r.wall_ms
        )?;
    }
    Ok(())
}
