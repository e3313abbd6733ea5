//! Property tests over randomly generated instances: format round-trips,
//! structural invariants of generation, dominance filtering against a
//! pairwise reference, move validity, and the evaluation function's
//! characterizations of stability.

use proptest::prelude::*;

use smti::generator::{generate, GenParams};
use smti::instance::{Instance, PersonId, Preference, Side};
use smti::localsearch::{random_matching, search, SearchConfig, SearchRng, Variant};
use smti::matching::{
    blocking_pairs, evaluate, is_blocking, is_perfect, is_stable, remove_blocking_pair,
    undominated_blocking_pairs, BlockingPair,
};
use rand::SeedableRng;
use smti::oracle::{all_matchings, enumerate_stable, max_stable_size};

fn instance_strategy(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 0.0..=0.8f64, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p1, p2, seed)| {
        generate(&GenParams::new(n, p1, p2, seed)).expect("parameters keep rejection rare")
    })
}

fn persons(inst: &Instance) -> Vec<PersonId> {
    (1..=inst.n() as u32)
        .flat_map(|i| [PersonId::man(i), PersonId::woman(i)])
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_text_round_trips(inst in instance_strategy(10)) {
        let text = inst.to_text();
        let back = Instance::parse(&text).expect("serialized text parses");
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn generated_instances_are_symmetric_with_dense_ranks(inst in instance_strategy(10)) {
        let n = inst.n() as u32;
        for m in 1..=n {
            for w in 1..=n {
                prop_assert_eq!(
                    inst.rank(PersonId::man(m), w).is_some(),
                    inst.rank(PersonId::woman(w), m).is_some()
                );
            }
        }
        for p in persons(&inst) {
            let list = inst.list(p);
            prop_assert!(!list.is_empty());
            let mut ranks: Vec<u32> =
                inst.partners(p).map(|c| inst.rank(p, c).unwrap()).collect();
            ranks.sort_unstable();
            ranks.dedup();
            prop_assert_eq!(ranks, (1..=list.num_groups() as u32).collect::<Vec<_>>());
        }
    }

    #[test]
    fn preference_queries_are_consistent(inst in instance_strategy(6)) {
        use Preference::*;
        for p in persons(&inst) {
            let cands: Vec<u32> = inst.partners(p).collect();
            for &a in &cands {
                prop_assert_eq!(inst.prefers(p, a, None).unwrap(), StrictlyPrefers);
                prop_assert_eq!(inst.prefers(p, a, Some(a)).unwrap(), Indifferent);
                for &b in &cands {
                    let ab = inst.prefers(p, a, Some(b)).unwrap();
                    let ba = inst.prefers(p, b, Some(a)).unwrap();
                    let flipped = match ab {
                        StrictlyPrefers => StrictlyDispreferred,
                        StrictlyDispreferred => StrictlyPrefers,
                        other => other,
                    };
                    prop_assert_eq!(ba, flipped);
                    for &c in &cands {
                        let bc = inst.prefers(p, b, Some(c)).unwrap();
                        let ac = inst.prefers(p, a, Some(c)).unwrap();
                        if ab == StrictlyPrefers && matches!(bc, StrictlyPrefers | Indifferent) {
                            prop_assert_eq!(ac, StrictlyPrefers);
                        }
                        if ab == Indifferent && bc == Indifferent {
                            prop_assert_eq!(ac, Indifferent);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn undominated_filter_matches_pairwise_dominance(
        inst in instance_strategy(10),
        seed in any::<u64>(),
        first_is_man in any::<bool>(),
    ) {
        let mut rng = SearchRng::seed_from_u64(seed);
        let m = random_matching(&inst, &mut rng);
        let first = if first_is_man { Side::Man } else { Side::Woman };
        let fast = undominated_blocking_pairs(&inst, &m, first);
        let all = blocking_pairs(&inst, &m);
        prop_assert!(fast.iter().all(|bp| all.contains(bp)));
        prop_assert_eq!(fast, pairwise_undominated(&inst, &all, first));
    }

    #[test]
    fn neighbor_moves_marry_the_pair_and_preserve_validity(
        inst in instance_strategy(10),
        seed in any::<u64>(),
    ) {
        let mut rng = SearchRng::seed_from_u64(seed);
        let m = random_matching(&inst, &mut rng);
        for bp in blocking_pairs(&inst, &m) {
            prop_assert!(is_blocking(&inst, &m, bp));
            let next = remove_blocking_pair(&inst, &m, bp).unwrap();
            prop_assert_eq!(next.wife_of(bp.man), Some(bp.woman));
            for (man, w) in next.pairs() {
                prop_assert!(inst.acceptable(PersonId::man(man), w));
            }
            // The move touches exactly the pair and their former partners.
            let om = m.husband_of(bp.woman);
            let ow = m.wife_of(bp.man);
            for x in 1..=inst.n() as u32 {
                let expect = if x == bp.man {
                    Some(bp.woman)
                } else if Some(x) == om {
                    None
                } else {
                    m.wife_of(x)
                };
                prop_assert_eq!(next.wife_of(x), expect);
            }
            for y in 1..=inst.n() as u32 {
                let expect = if y == bp.woman {
                    Some(bp.man)
                } else if Some(y) == ow {
                    None
                } else {
                    m.husband_of(y)
                };
                prop_assert_eq!(next.husband_of(y), expect);
            }
        }
    }

    #[test]
    fn evaluation_characterizes_stability(inst in instance_strategy(5)) {
        for m in all_matchings(&inst, 5).unwrap() {
            let eval = evaluate(&inst, &m);
            let stable = is_stable(&inst, &m);
            prop_assert_eq!(stable, eval.nbp == 0);
            prop_assert_eq!(eval.f() == 0, stable && is_perfect(&m));
            if stable {
                // With no blocking pairs every single is uncovered.
                prop_assert_eq!(eval.f(), 2 * (inst.n() - m.size()));
            }
        }
    }

    #[test]
    fn search_reports_a_truthful_result(
        inst in instance_strategy(8),
        seed in any::<u64>(),
    ) {
        let cfg = SearchConfig { max_steps: 300, seed, ..Default::default() };
        let result = search(&inst, &cfg);
        prop_assert_eq!(result.stable, is_stable(&inst, &result.best));
        prop_assert_eq!(result.perfect, result.best.size() == inst.n());
        prop_assert_eq!(result.best_eval, evaluate(&inst, &result.best));
        prop_assert!(result.steps_taken <= cfg.max_steps + 1);
        prop_assert!(result.walks <= result.steps_taken);
        prop_assert!(result.restarts <= result.steps_taken);
    }
}

// Reference implementation of the two-pass dominance filter, O(k^2) via the
// public preference queries instead of rank bookkeeping.
fn pairwise_undominated(inst: &Instance, all: &[BlockingPair], first: Side) -> Vec<BlockingPair> {
    let beats = |side: Side, a: &BlockingPair, b: &BlockingPair| -> bool {
        match side {
            Side::Man => {
                a.man == b.man
                    && inst.prefers(PersonId::man(a.man), a.woman, Some(b.woman)).unwrap()
                        == Preference::StrictlyPrefers
            }
            Side::Woman => {
                a.woman == b.woman
                    && inst.prefers(PersonId::woman(a.woman), a.man, Some(b.man)).unwrap()
                        == Preference::StrictlyPrefers
            }
        }
    };
    let pass = |side: Side, pairs: &[BlockingPair]| -> Vec<BlockingPair> {
        pairs
            .iter()
            .filter(|x| !pairs.iter().any(|y| beats(side, y, x)))
            .copied()
            .collect()
    };
    pass(first.opposite(), &pass(first, all))
}

#[test]
fn a_generous_step_budget_solves_every_small_instance() {
    // Small instances across the parameter grid; the search must find a
    // maximum-size weakly stable marriage well within the budget.
    let mut solved = 0;
    for k in 0..50u64 {
        let p1 = 0.1 + 0.1 * (k % 8) as f64;
        let p2 = 0.1 * (k % 11) as f64;
        let inst = generate(&GenParams::new(5, p1, p2, 9000 + k)).unwrap();
        let best_possible = max_stable_size(&inst, 5).unwrap();
        let cfg = SearchConfig { max_steps: 200_000, seed: k, ..Default::default() };
        let result = search(&inst, &cfg);
        assert!(result.stable, "instance {k} ended unstable");
        assert!(is_stable(&inst, &result.best));
        assert_eq!(
            result.best.size(),
            best_possible,
            "instance {k} (p1 {p1:.1}, p2 {p2:.1}) found {} of {best_possible}",
            result.best.size()
        );
        solved += 1;
    }
    assert_eq!(solved, 50);
}

#[test]
fn searched_marriages_agree_with_exhaustive_enumeration() {
    // The oracle's stable set contains everything a converged search returns.
    for seed in 0..10u64 {
        let inst = generate(&GenParams::new(4, 0.3, 0.5, 400 + seed)).unwrap();
        let report = enumerate_stable(&inst, 5).unwrap();
        let cfg = SearchConfig { max_steps: 50_000, seed, variant: Variant::Lti, ..Default::default() };
        let result = search(&inst, &cfg);
        if result.stable {
            assert!(
                report.all_stable.contains(&result.best),
                "seed {seed}: search returned a stable marriage the oracle missed"
            );
        }
    }
}
