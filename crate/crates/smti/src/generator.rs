//! Seeded random instance generation.
//!
//! An instance is drawn in three passes: complete strict lists as independent
//! uniform permutations, a deletion pass that drops each man/woman pair with
//! probability `p1` (from both lists at once, keeping acceptability
//! symmetric), and a tie pass that merges each remaining list position into
//! the preceding tie group with probability `p2`. Draws containing an empty
//! list are discarded and redrawn from the same stream, up to a cap.
//!
//! `p2 = 0` yields strict lists, `p2 = 1` collapses each list into a single
//! tie; expected list length is `n * (1 - p1)`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use thiserror::Error;

use crate::instance::{Groups, Instance};
use crate::localsearch::SearchRng;
use crate::seed;

/// Redraw budget for [`GenParams::max_rejects`].
pub const DEFAULT_MAX_REJECTS: usize = 10_000;

/// The benchmark grid: every combination of these deletion and tie
/// probabilities, see [`sweep_grid`].
pub const GRID_P1: [f64; 8] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
pub const GRID_P2: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    /// Probability each list entry is deleted, together with its mirror.
    pub p1: f64,
    /// Probability a list position merges into the preceding tie group.
    pub p2: f64,
    pub seed: u64,
    /// How many draws with an empty list to tolerate before giving up.
    pub max_rejects: usize,
}

impl GenParams {
    pub fn new(n: usize, p1: f64, p2: f64, seed: u64) -> GenParams {
        GenParams { n, p1, p2, seed, max_rejects: DEFAULT_MAX_REJECTS }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("generator parameters out of range: {msg}")]
    InvalidParams { msg: String },
    #[error("gave up after {attempts} draws, every one containing an empty list")]
    RejectCapExceeded { attempts: usize },
}

/// Draw one instance.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    validate(params)?;
    let mut rng = SearchRng::seed_from_u64(params.seed);
    for _ in 0..params.max_rejects {
        if let Some(inst) = draw(params, &mut rng) {
            return Ok(inst);
        }
    }
    Err(GenError::RejectCapExceeded { attempts: params.max_rejects })
}

/// Seed for instance `k` of a grid cell, derived so that every cell and
/// index gets its own decorrelated stream under one base seed.
pub fn instance_seed(base: u64, n: usize, p1: f64, p2: f64, k: usize) -> u64 {
    seed::mix(base, &[n as u64, seed::permille(p1), seed::permille(p2), k as u64])
}

/// Generate `per_cell` instances for every `(p1, p2)` cell of the benchmark
/// grid, lazily, in row-major order with `p2` varying fastest.
pub fn sweep_grid(
    n: usize,
    per_cell: usize,
    base_seed: u64,
) -> impl Iterator<Item = (GenParams, Result<Instance, GenError>)> {
    GRID_P1.iter().flat_map(move |&p1| {
        GRID_P2.iter().flat_map(move |&p2| {
            (0..per_cell).map(move |k| {
                let params = GenParams::new(n, p1, p2, instance_seed(base_seed, n, p1, p2, k));
                let inst = generate(&params);
                (params, inst)
            })
        })
    })
}

fn validate(params: &GenParams) -> Result<(), GenError> {
    let fail = |msg: String| Err(GenError::InvalidParams { msg });
    if params.n == 0 {
        return fail("n must be at least 1".into());
    }
    if !(0.0..=1.0).contains(&params.p1) {
        return fail(format!("p1 = {} must lie in [0, 1]", params.p1));
    }
    if !(0.0..=1.0).contains(&params.p2) {
        return fail(format!("p2 = {} must lie in [0, 1]", params.p2));
    }
    if params.max_rejects == 0 {
        return fail("max_rejects must be at least 1".into());
    }
    Ok(())
}

fn draw(params: &GenParams, rng: &mut SearchRng) -> Option<Instance> {
    let n = params.n;

    // Complete strict lists: one uniform permutation per person, men first.
    let permutation = |rng: &mut SearchRng| {
        let mut p: Vec<u32> = (1..=n as u32).collect();
        p.shuffle(rng);
        p
    };
    let men_strict: Vec<Vec<u32>> = (0..=n).map(|m| if m == 0 { vec![] } else { permutation(rng) }).collect();
    let women_strict: Vec<Vec<u32>> =
        (0..=n).map(|w| if w == 0 { vec![] } else { permutation(rng) }).collect();

    // Deletion pass, decided once per pair on the men's side.
    let mut deleted = vec![false; (n + 1) * (n + 1)];
    for m in 1..=n {
        for &w in &men_strict[m] {
            if rng.random::<f64>() < params.p1 {
                deleted[m * (n + 1) + w as usize] = true;
            }
        }
    }

    let men_kept: Vec<Vec<u32>> = (0..=n)
        .map(|m| men_strict[m].iter().copied().filter(|&w| !deleted[m * (n + 1) + w as usize]).collect())
        .collect();
    let women_kept: Vec<Vec<u32>> = (0..=n)
        .map(|w| {
            women_strict[w]
                .iter()
                .copied()
                .filter(|&m| !deleted[m as usize * (n + 1) + w])
                .collect()
        })
        .collect();
    if men_kept[1..].iter().any(Vec::is_empty) || women_kept[1..].iter().any(Vec::is_empty) {
        return None;
    }

    // Tie pass: each later position joins the previous group with
    // probability p2, so merge runs chain into larger groups.
    let tie_up = |list: &[u32], rng: &mut SearchRng| -> Groups {
        let mut groups: Groups = vec![vec![list[0]]];
        for &c in &list[1..] {
            if rng.random::<f64>() < params.p2 {
                groups.last_mut().unwrap().push(c);
            } else {
                groups.push(vec![c]);
            }
        }
        groups
    };
    let men: Vec<Groups> = (1..=n).map(|m| tie_up(&men_kept[m], rng)).collect();
    let women: Vec<Groups> = (1..=n).map(|w| tie_up(&women_kept[w], rng)).collect();

    Some(Instance::new(n, men, women).expect("generated lists are symmetric and well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::PersonId;

    #[test]
    fn zero_probabilities_give_complete_strict_lists() {
        for seed in 0..5 {
            let inst = generate(&GenParams::new(6, 0.0, 0.0, seed)).unwrap();
            for i in 1..=6 {
                for p in [PersonId::man(i), PersonId::woman(i)] {
                    assert_eq!(inst.list(p).len(), 6);
                    assert_eq!(inst.list(p).num_groups(), 6);
                    let mut partners: Vec<u32> = inst.partners(p).collect();
                    partners.sort_unstable();
                    assert_eq!(partners, (1..=6).collect::<Vec<u32>>());
                }
            }
        }
    }

    #[test]
    fn full_tie_probability_collapses_each_list_into_one_group() {
        let inst = generate(&GenParams::new(8, 0.3, 1.0, 3)).unwrap();
        for i in 1..=8 {
            assert_eq!(inst.list(PersonId::man(i)).num_groups(), 1);
            assert_eq!(inst.list(PersonId::woman(i)).num_groups(), 1);
        }
    }

    #[test]
    fn deletion_keeps_acceptability_symmetric() {
        for seed in 0..50 {
            let inst = generate(&GenParams::new(10, 0.6, 0.4, seed)).unwrap();
            let mut pairs = 0;
            for m in 1..=10 {
                for w in 1..=10 {
                    let mw = inst.rank(PersonId::man(m), w).is_some();
                    let wm = inst.rank(PersonId::woman(w), m).is_some();
                    assert_eq!(mw, wm, "asymmetric at ({m}, {w}) seed {seed}");
                    pairs += usize::from(mw);
                }
            }
            assert!(pairs < 100, "no deletion happened at p1 = 0.6");
        }
    }

    #[test]
    fn mean_list_length_tracks_the_deletion_probability() {
        let mut total = 0usize;
        let mut lists = 0usize;
        for seed in 0..30 {
            let inst = generate(&GenParams::new(100, 0.5, 0.0, seed)).unwrap();
            for i in 1..=100 {
                total += inst.list(PersonId::man(i)).len();
                lists += 1;
            }
        }
        let mean = total as f64 / lists as f64;
        assert!((48.0..=52.0).contains(&mean), "mean list length {mean}");
    }

    #[test]
    fn tie_frequency_tracks_the_merge_probability() {
        let mut merges = 0usize;
        let mut positions = 0usize;
        for seed in 0..40 {
            let inst = generate(&GenParams::new(50, 0.2, 0.5, seed)).unwrap();
            for i in 1..=50 {
                for p in [PersonId::man(i), PersonId::woman(i)] {
                    let list = inst.list(p);
                    merges += list.len() - list.num_groups();
                    positions += list.len() - 1;
                }
            }
        }
        let freq = merges as f64 / positions as f64;
        assert!((0.47..=0.53).contains(&freq), "merge frequency {freq}");
    }

    #[test]
    fn rejection_cap_is_reported() {
        let params = GenParams { max_rejects: 50, ..GenParams::new(5, 0.99, 0.0, 0) };
        assert_eq!(generate(&params), Err(GenError::RejectCapExceeded { attempts: 50 }));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(&GenParams::new(15, 0.4, 0.6, 77)).unwrap();
        let b = generate(&GenParams::new(15, 0.4, 0.6, 77)).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let c = generate(&GenParams::new(15, 0.4, 0.6, 78)).unwrap();
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        for params in [
            GenParams::new(0, 0.5, 0.5, 0),
            GenParams::new(5, -0.1, 0.5, 0),
            GenParams::new(5, 0.5, 1.5, 0),
            GenParams { max_rejects: 0, ..GenParams::new(5, 0.5, 0.5, 0) },
        ] {
            assert!(matches!(generate(&params), Err(GenError::InvalidParams { .. })), "{params:?}");
        }
    }

    #[test]
    fn grid_covers_every_benchmark_cell() {
        let items: Vec<_> = sweep_grid(6, 2, 99).collect();
        assert_eq!(items.len(), 8 * 11 * 2);
        for (params, inst) in &items {
            assert!(inst.is_ok(), "cell ({}, {}) failed: {inst:?}", params.p1, params.p2);
        }
        let (first, _) = &items[0];
        assert_eq!((first.p1, first.p2), (0.1, 0.0));
        assert_eq!(first.seed, instance_seed(99, 6, 0.1, 0.0, 0));

        let again: Vec<_> = sweep_grid(6, 2, 99).collect();
        for (a, b) in items.iter().zip(&again) {
            assert_eq!(a.1.as_ref().unwrap().to_text(), b.1.as_ref().unwrap().to_text());
        }
        let other: Vec<_> = sweep_grid(6, 2, 100).collect();
        assert!(
            items.iter().zip(&other).any(|(a, b)| {
                a.1.as_ref().unwrap().to_text() != b.1.as_ref().unwrap().to_text()
            }),
            "base seed had no effect"
        );
    }

    #[test]
    fn cell_seeds_are_distinct() {
        let seeds = [
            instance_seed(7, 6, 0.1, 0.0, 0),
            instance_seed(7, 6, 0.1, 0.0, 1),
            instance_seed(7, 6, 0.1, 0.1, 0),
            instance_seed(7, 6, 0.2, 0.0, 0),
            instance_seed(7, 7, 0.1, 0.0, 0),
            instance_seed(8, 6, 0.1, 0.0, 0),
        ];
        let distinct: std::collections::HashSet<u64> = seeds.iter().copied().collect();
        assert_eq!(distinct.len(), seeds.len());
    }
}
