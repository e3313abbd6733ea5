//! Quality-versus-steps trajectories: how good the best-so-far marriage is
//! after a given number of search steps, averaged over many runs.

use std::io::{self, Write};

use rayon::prelude::*;

use smti::generator::{self, GenParams};
use smti::localsearch::{search, SearchConfig, TrajectorySample, Variant};

use crate::sweep::run_seed;

/// One `(p1, p2)` cell, many runs, sampled every `stride` steps.
#[derive(Clone, Debug)]
pub struct TrajectorySpec {
    pub n: usize,
    pub variant: Variant,
    pub p1: f64,
    pub p2: f64,
    pub instances: usize,
    pub runs_per_instance: usize,
    pub max_steps: usize,
    pub stride: usize,
    pub walk_probability: f64,
    pub base_seed: u64,
}

/// Averages over all runs at one sampled step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub step: usize,
    /// Mean blocking pairs of the best marriage, divided by `n`.
    pub avg_nbp_norm: f64,
    /// Mean singles per side of the best marriage, divided by `n`.
    pub avg_singles_norm: f64,
    /// Fraction of runs whose best marriage is weakly stable.
    pub frac_best_stable: f64,
}

#[derive(Clone, Debug)]
pub struct TrajectoryReport {
    pub points: Vec<TrajectoryPoint>,
    pub runs: usize,
    pub gen_failures: usize,
}

/// Run the cell and average the per-run samples at steps `0, stride, ...`
/// up to `max_steps`. Runs that stop early keep contributing their final
/// best-so-far values at later sampled steps.
pub fn run_trajectory(spec: &TrajectorySpec) -> TrajectoryReport {
    assert!(spec.stride >= 1, "stride must be at least 1");
    let grid: Vec<usize> = (0..=spec.max_steps).step_by(spec.stride).collect();

    // One expanded series per run, collected in instance order so float
    // accumulation order is fixed regardless of thread count.
    let per_instance: Vec<(Vec<Vec<TrajectorySample>>, bool)> = (0..spec.instances)
        .into_par_iter()
        .map(|k| {
            let instance_seed =
                generator::instance_seed(spec.base_seed, spec.n, spec.p1, spec.p2, k);
            let inst = match generator::generate(&GenParams::new(
                spec.n,
                spec.p1,
                spec.p2,
                instance_seed,
            )) {
                Ok(inst) => inst,
                Err(_) => return (Vec::new(), true),
            };
            let mut runs = Vec::with_capacity(spec.runs_per_instance);
            for r in 0..spec.runs_per_instance {
                let cfg = SearchConfig {
                    variant: spec.variant,
                    max_steps: spec.max_steps,
                    walk_probability: spec.walk_probability,
                    seed: run_seed(instance_seed, r),
                    trajectory_stride: Some(spec.stride),
                    ..Default::default()
                };
                runs.push(search(&inst, &cfg).trajectory.expect("stride was configured"));
            }
            (runs, false)
        })
        .collect();

    let mut nbp_sum = vec![0.0f64; grid.len()];
    let mut singles_sum = vec![0.0f64; grid.len()];
    let mut stable_sum = vec![0.0f64; grid.len()];
    let mut runs = 0usize;
    let mut gen_failures = 0usize;
    for (instance_runs, failed) in &per_instance {
        gen_failures += usize::from(*failed);
        for samples in instance_runs {
            runs += 1;
            // Samples are sparse (stride multiples plus the terminal step);
            // carry the last one forward across the grid.
            let mut si = 0;
            for (gi, &g) in grid.iter().enumerate() {
                while si + 1 < samples.len() && samples[si + 1].step <= g {
                    si += 1;
                }
                let s = samples[si];
                nbp_sum[gi] += s.best_nbp as f64 / spec.n as f64;
                singles_sum[gi] += s.best_singles as f64 / spec.n as f64;
                stable_sum[gi] += f64::from(s.best_nbp == 0);
            }
        }
    }

    let points = grid
        .iter()
        .enumerate()
        .map(|(gi, &step)| TrajectoryPoint {
            step,
            avg_nbp_norm: if runs == 0 { 0.0 } else { nbp_sum[gi] / runs as f64 },
            avg_singles_norm: if runs == 0 { 0.0 } else { singles_sum[gi] / runs as f64 },
            frac_best_stable: if runs == 0 { 0.0 } else { stable_sum[gi] / runs as f64 },
        })
        .collect();
    TrajectoryReport { points, runs, gen_failures }
}

/// Trajectory CSV: `#` metadata, then one line per sampled step. Contains
/// no timing data, so equal seeds give byte-identical files.
pub fn write_trajectory_csv(
    spec: &TrajectorySpec,
    report: &TrajectoryReport,
    w: &mut impl Write,
) -> io::Result<()> {
    writeln!(w, "# smti-bench trajectory")?;
    writeln!(
        w,
        "# n={} variant={} p1={} p2={} instances={} runs_per_instance={} max_steps={} \
         stride={} walk_prob={} base_seed={} runs={} gen_failures={}",
        spec.n,
        spec.variant,
        spec.p1,
        spec.p2,
        spec.instances,
        spec.runs_per_instance,
        spec.max_steps,
        spec.stride,
        spec.walk_probability,
        spec.base_seed,
        report.runs,
        report.gen_failures
    )?;
    writeln!(w, "# counts are normalized by n={}", spec.n)?;
    writeln!(w, "step,avg_nbp_norm,avg_singles_norm,frac_best_stable")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{}",
            p.step, p.avg_nbp_norm, p.avg_singles_norm, p.frac_best_stable
        )?;
    }
    Ok(())
}
