//! Experiment harness behind the `smti-bench` CLI: seeded parameter sweeps,
//! quality-versus-steps trajectories, and their CSV reports.
//!
//! Everything here is deterministic under a base seed: instance seeds come
//! from the generator's per-cell derivation and run seeds are mixed from the
//! instance seed and run index, so reports are reproducible byte for byte
//! except for wall-clock columns (always placed last).

pub mod sweep;
pub mod trajectory;
