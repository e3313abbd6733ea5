//! Randomized local search for maximum-size weakly stable marriages.
//!
//! The search walks the space of marriages, moving between neighbors that
//! differ by the removal of one blocking pair: the pair marries and both
//! previous partners become single. Each iteration either takes a uniformly
//! random neighbor (with the configured walk probability), moves to a neighbor
//! minimizing the evaluation `f = nbp + ns`, or restarts from a fresh random
//! marriage when the neighborhood is empty. `f` reaches zero exactly on a
//! weakly stable marriage that matches everyone, so the search doubles as an
//! optimizer and a stability test.
//!
//! Two neighborhoods are available: [`Variant::Lti`] considers every blocking
//! pair, [`Variant::Ltiu`] only the undominated ones, filtered from the side
//! that alternates each step.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{Instance, PersonId, Side};
use crate::matching::{
    analyze_into, blocking_pairs, dominance_filter_into, is_blocking, is_perfect, is_stable,
    undominated_blocking_pairs, Analysis, BlockingPair, Evaluation, Matching,
};

/// The random stream every randomized routine in this crate draws from.
///
/// A small-round ChaCha keeps runs reproducible across platforms: the same
/// seed yields the same marriages, moves, and results everywhere.
pub type SearchRng = ChaCha8Rng;

/// Which neighborhood the search explores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Neighbors come from every blocking pair.
    Lti,
    /// Neighbors come from undominated blocking pairs only.
    Ltiu,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Lti => "lti",
            Variant::Ltiu => "ltiu",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown variant {got:?}, expected \"lti\" or \"ltiu\"")]
pub struct ParseVariantError {
    got: String,
}

impl FromStr for Variant {
    type Err = ParseVariantError;

    fn from_str(s: &str) -> Result<Variant, ParseVariantError> {
        match s {
            "lti" => Ok(Variant::Lti),
            "ltiu" => Ok(Variant::Ltiu),
            _ => Err(ParseVariantError { got: s.to_string() }),
        }
    }
}

/// Search parameters. The defaults match the benchmark harness defaults.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub variant: Variant,
    /// Step budget; the search runs at most `max_steps + 1` iterations, since
    /// the counter is checked after each one. Must be at least 1.
    pub max_steps: usize,
    /// Probability of a random-walk step, in `[0, 1]`.
    pub walk_probability: f64,
    pub seed: u64,
    /// When set, sample the best-so-far marriage every this many steps
    /// (plus one sample at step 0 and one at termination). Must be at least 1.
    pub trajectory_stride: Option<usize>,
    /// Side the undominated filter applies first on even steps.
    pub first_filter_side: Side,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            variant: Variant::Ltiu,
            max_steps: 50_000,
            walk_probability: 0.2,
            seed: 0,
            trajectory_stride: None,
            first_filter_side: Side::Man,
        }
    }
}

/// A snapshot of the best-so-far marriage partway through a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrajectorySample {
    /// Iterations completed when the sample was taken.
    pub step: usize,
    /// Blocking pairs of the best marriage at that point.
    pub best_nbp: usize,
    /// Singles per side of the best marriage at that point.
    pub best_singles: usize,
}

/// Outcome of one search run.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Best marriage seen, per the adoption policy in [`search`].
    pub best: Matching,
    pub best_eval: Evaluation,
    /// Whether `best` is weakly stable.
    pub stable: bool,
    /// Whether `best` matches everyone.
    pub perfect: bool,
    /// Iterations executed; zero when the initial random marriage already
    /// has `f = 0`.
    pub steps_taken: usize,
    /// Iterations that replaced the marriage with a fresh random one.
    pub restarts: usize,
    /// Iterations on which the walk coin came up, restarts included.
    pub walks: usize,
    /// Distinct weakly stable marriages encountered during the run.
    pub distinct_stable: usize,
    pub wall_time: Duration,
    /// Best-so-far samples, present when a stride was configured.
    pub trajectory: Option<Vec<TrajectorySample>>,
}

/// What a single iteration did; see [`search_traced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepAction {
    /// Moved to a uniformly random neighbor.
    Walk,
    /// Moved to an `f`-minimizing neighbor.
    Move,
    /// Replaced the marriage with a fresh random one (empty neighborhood).
    Restart {
        /// Whether the walk coin had come up on this iteration.
        during_walk: bool,
    },
}

/// Per-iteration report passed to the observer of [`search_traced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepTrace {
    /// Zero-based iteration index.
    pub step: usize,
    pub action: StepAction,
    /// Side the undominated filter applied first; `None` for [`Variant::Lti`].
    pub filter_first: Option<Side>,
    /// Evaluation of the current marriage after the iteration's move.
    pub f_after: usize,
    pub nbp_after: usize,
    pub stable_after: bool,
    /// Evaluation of the best-so-far marriage after the iteration.
    pub best_f: usize,
    pub best_stable: bool,
    /// Whether this iteration's marriage became the new best.
    pub adopted: bool,
}

/// Draw a random marriage: men are visited in shuffled order and each marries
/// a uniformly random still-single woman from his list, staying single only
/// when every listed woman is taken.
///
/// The result is always a maximal marriage. That loses nothing: an acceptable
/// pair of singles would block, so every stable marriage is maximal, and each
/// of them comes up with positive probability.
pub fn random_matching(inst: &Instance, rng: &mut SearchRng) -> Matching {
    let n = inst.n();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.shuffle(rng);
    let mut out = Matching::empty(n);
    let mut open: Vec<u32> = Vec::new();
    for man in order {
        open.clear();
        open.extend(inst.partners(PersonId::man(man)).filter(|&w| out.husband_of(w).is_none()));
        if !open.is_empty() {
            let w = open[rng.random_range(0..open.len())];
            out.set_pair(man, w);
        }
    }
    out
}

/// Side the undominated filter applies first on the iteration with the given
/// zero-based index: `start` on even indices, its opposite on odd ones.
pub fn filter_side_for_step(start: Side, step: usize) -> Side {
    if step % 2 == 0 {
        start
    } else {
        start.opposite()
    }
}

/// The candidate moves from `m` under the given neighborhood.
pub fn neighborhood_pairs(
    inst: &Instance,
    m: &Matching,
    variant: Variant,
    first: Side,
) -> Vec<BlockingPair> {
    match variant {
        Variant::Lti => blocking_pairs(inst, m),
        Variant::Ltiu => undominated_blocking_pairs(inst, m, first),
    }
}

/// Remove a uniformly random pair from `pairs`; with an empty neighborhood
/// the walk degenerates to a fresh random marriage.
pub fn random_walk(
    inst: &Instance,
    m: &Matching,
    pairs: &[BlockingPair],
    rng: &mut SearchRng,
) -> Matching {
    if pairs.is_empty() {
        return random_matching(inst, rng);
    }
    let bp = pairs[rng.random_range(0..pairs.len())];
    let mut out = m.clone();
    out.apply_removal(bp);
    out
}

/// Remove the pair whose removal minimizes `f`, breaking ties uniformly at
/// random. `pairs` must be non-empty and each pair must block `m`.
///
/// A unique minimum consumes no randomness; ties cost one draw.
pub fn best_neighbor(
    inst: &Instance,
    m: &Matching,
    pairs: &[BlockingPair],
    rng: &mut SearchRng,
) -> Matching {
    assert!(!pairs.is_empty(), "best_neighbor requires a non-empty candidate set");
    debug_assert!(pairs.iter().all(|&bp| is_blocking(inst, m, bp)));
    let mut analysis = Analysis::default();
    analyze_into(inst, m, &mut analysis);
    let mut scratch = DeltaScratch::new(inst.n());
    let mut minima = Vec::new();
    let bp = select_best(inst, m, &analysis, &mut scratch, &mut minima, pairs, rng);
    let mut out = m.clone();
    out.apply_removal(bp);
    out
}

/// Run the local search; see the module docs for the step semantics.
///
/// Starting from a random marriage, the search keeps the best marriage seen:
/// the first weakly stable one replaces the incumbent unconditionally, an
/// unstable incumbent is replaced by anything with lower `f`, and a stable
/// incumbent only by a stable marriage with lower `f`. The run ends as soon
/// as `f = 0` is reached or once the step budget is spent.
///
/// Panics when the configuration is out of range (`max_steps` or a configured
/// stride of zero, walk probability outside `[0, 1]`).
pub fn search(inst: &Instance, cfg: &SearchConfig) -> SearchResult {
    search_traced(inst, cfg, |_| {})
}

/// [`search`], reporting every iteration to `observe`.
pub fn search_traced(
    inst: &Instance,
    cfg: &SearchConfig,
    mut observe: impl FnMut(&StepTrace),
) -> SearchResult {
    assert!(cfg.max_steps >= 1, "max_steps must be at least 1");
    assert!(
        (0.0..=1.0).contains(&cfg.walk_probability),
        "walk_probability must lie in [0, 1]"
    );
    if let Some(stride) = cfg.trajectory_stride {
        assert!(stride >= 1, "trajectory_stride must be at least 1");
    }

    let start = Instant::now();
    let n = inst.n();
    let mut rng = SearchRng::seed_from_u64(cfg.seed);

    let mut cur = random_matching(inst, &mut rng);
    let mut analysis = Analysis::default();
    analyze_into(inst, &cur, &mut analysis);

    let mut best = cur.clone();
    let mut best_eval = Evaluation { nbp: analysis.nbp, ns: analysis.ns };
    let mut found_stable = analysis.nbp == 0;

    // Keyed by hash only: a collision would undercount the diagnostic
    // distinct-stable tally, never affect the search itself.
    let mut stable_seen: HashSet<u64> = HashSet::new();
    if analysis.nbp == 0 {
        stable_seen.insert(matching_key(&cur));
    }

    let mut steps = 0usize;
    let mut restarts = 0usize;
    let mut walks = 0usize;

    let mut scratch = DeltaScratch::new(n);
    let mut minima: Vec<usize> = Vec::new();
    let mut filtered: Vec<BlockingPair> = Vec::new();

    let mut trajectory: Option<Vec<TrajectorySample>> = cfg.trajectory_stride.map(|_| Vec::new());
    push_sample(&mut trajectory, 0, &best, best_eval);

    loop {
        if analysis.f() == 0 {
            best.clone_from(&cur);
            best_eval = Evaluation { nbp: 0, ns: 0 };
            break;
        }

        let first = filter_side_for_step(cfg.first_filter_side, steps);
        let walk_coin = rng.random::<f64>() <= cfg.walk_probability;
        let pairs: &[BlockingPair] = match cfg.variant {
            Variant::Lti => &analysis.blocking,
            Variant::Ltiu => {
                dominance_filter_into(inst, &analysis.blocking, first, &mut filtered);
                &filtered
            }
        };

        let action = if pairs.is_empty() {
            if walk_coin {
                walks += 1;
            }
            restarts += 1;
            cur = random_matching(inst, &mut rng);
            StepAction::Restart { during_walk: walk_coin }
        } else if walk_coin {
            walks += 1;
            let bp = pairs[rng.random_range(0..pairs.len())];
            cur.apply_removal(bp);
            StepAction::Walk
        } else {
            let bp = select_best(inst, &cur, &analysis, &mut scratch, &mut minima, pairs, &mut rng);
            cur.apply_removal(bp);
            StepAction::Move
        };

        analyze_into(inst, &cur, &mut analysis);
        let eval = Evaluation { nbp: analysis.nbp, ns: analysis.ns };
        let stable_now = analysis.nbp == 0;
        if stable_now {
            stable_seen.insert(matching_key(&cur));
        }

        let adopt = if stable_now && !found_stable {
            true
        } else if !found_stable {
            eval.f() < best_eval.f()
        } else {
            stable_now && eval.f() < best_eval.f()
        };
        if stable_now {
            found_stable = true;
        }
        if adopt {
            best.clone_from(&cur);
            best_eval = eval;
        }

        observe(&StepTrace {
            step: steps,
            action,
            filter_first: (cfg.variant == Variant::Ltiu).then_some(first),
            f_after: eval.f(),
            nbp_after: eval.nbp,
            stable_after: stable_now,
            best_f: best_eval.f(),
            best_stable: best_eval.nbp == 0,
            adopted: adopt,
        });

        steps += 1;
        if let Some(stride) = cfg.trajectory_stride {
            if steps % stride == 0 {
                push_sample(&mut trajectory, steps, &best, best_eval);
            }
        }
        if steps > cfg.max_steps {
            break;
        }
    }

    if let Some(traj) = trajectory.as_mut() {
        if traj.last().map(|s| s.step) != Some(steps) {
            traj.push(TrajectorySample {
                step: steps,
                best_nbp: best_eval.nbp,
                best_singles: best.singles_per_side(),
            });
        }
    }

    let stable = best_eval.nbp == 0;
    debug_assert_eq!(stable, is_stable(inst, &best));
    SearchResult {
        perfect: is_perfect(&best),
        stable,
        best,
        best_eval,
        steps_taken: steps,
        restarts,
        walks,
        distinct_stable: stable_seen.len(),
        wall_time: start.elapsed(),
        trajectory,
    }
}

fn push_sample(
    traj: &mut Option<Vec<TrajectorySample>>,
    step: usize,
    best: &Matching,
    eval: Evaluation,
) {
    if let Some(t) = traj.as_mut() {
        t.push(TrajectorySample {
            step,
            best_nbp: eval.nbp,
            best_singles: best.singles_per_side(),
        });
    }
}

fn matching_key(m: &Matching) -> u64 {
    let mut h = DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}

// Reusable buffers for the incremental neighbor evaluation. Epoch stamps make
// clearing per candidate O(touched) instead of O(n).
struct DeltaScratch {
    epoch: u64,
    stamp_m: Vec<u64>,
    stamp_w: Vec<u64>,
    delta_m: Vec<i64>,
    delta_w: Vec<i64>,
    touched_m: Vec<u32>,
    touched_w: Vec<u32>,
}

impl DeltaScratch {
    fn new(n: usize) -> DeltaScratch {
        DeltaScratch {
            epoch: 0,
            stamp_m: vec![0; n + 1],
            stamp_w: vec![0; n + 1],
            delta_m: vec![0; n + 1],
            delta_w: vec![0; n + 1],
            touched_m: Vec::new(),
            touched_w: Vec::new(),
        }
    }

    fn begin(&mut self) {
        self.epoch += 1;
        self.touched_m.clear();
        self.touched_w.clear();
    }

    fn touch_m(&mut self, x: u32) {
        if self.stamp_m[x as usize] != self.epoch {
            self.stamp_m[x as usize] = self.epoch;
            self.delta_m[x as usize] = 0;
            self.touched_m.push(x);
        }
    }

    fn touch_w(&mut self, y: u32) {
        if self.stamp_w[y as usize] != self.epoch {
            self.stamp_w[y as usize] = self.epoch;
            self.delta_w[y as usize] = 0;
            self.touched_w.push(y);
        }
    }

    fn add_m(&mut self, x: u32, d: i64) {
        self.touch_m(x);
        self.delta_m[x as usize] += d;
    }

    fn add_w(&mut self, y: u32, d: i64) {
        self.touch_w(y);
        self.delta_w[y as usize] += d;
    }
}

// f(M') for the neighbor M' = M after removing bp, computed from the current
// analysis in O(degree of the four affected persons) instead of a full rescan.
//
// Only pairs incident to {bp.man, bp.woman, their previous partners} can
// change blocking status, since everyone else keeps their partner rank. The
// two loops below visit exactly those pairs once: men-side for the affected
// men, women-side for the affected women skipping pairs already seen.
fn neighbor_eval(
    inst: &Instance,
    cur: &Matching,
    a: &Analysis,
    s: &mut DeltaScratch,
    bp: BlockingPair,
) -> Evaluation {
    let m = bp.man;
    let w = bp.woman;
    let ow = cur.wife_raw(m);
    let om = cur.husband_raw(w);

    s.begin();
    s.touch_m(m);
    s.touch_w(w);
    if om != 0 {
        s.touch_m(om);
    }
    if ow != 0 {
        s.touch_w(ow);
    }

    let r_mw = inst.rank_mw(m, w);
    let r_wm = inst.rank_wm(w, m);
    let new_cur_m = |x: u32| {
        if x == m {
            r_mw
        } else if x == om {
            u32::MAX
        } else {
            a.cur_m[x as usize]
        }
    };
    let new_cur_w = |y: u32| {
        if y == w {
            r_wm
        } else if y == ow {
            u32::MAX
        } else {
            a.cur_w[y as usize]
        }
    };

    let mut dnbp: i64 = 0;
    for x in [m, om] {
        if x == 0 {
            continue;
        }
        let old_cm = a.cur_m[x as usize];
        let new_cm = new_cur_m(x);
        for &(y, r1) in inst.adj_m(x) {
            let r2 = inst.rank_wm(y, x);
            let was = r1 < old_cm && r2 < a.cur_w[y as usize];
            let now = r1 < new_cm && r2 < new_cur_w(y);
            if was != now {
                let d = if now { 1 } else { -1 };
                dnbp += d;
                s.add_m(x, d);
                s.add_w(y, d);
            }
        }
    }
    for y in [w, ow] {
        if y == 0 {
            continue;
        }
        let old_cw = a.cur_w[y as usize];
        let new_cw = new_cur_w(y);
        for &(x, r2) in inst.adj_w(y) {
            if x == m || x == om {
                continue;
            }
            let r1 = inst.rank_mw(x, y);
            let was = r1 < a.cur_m[x as usize] && r2 < old_cw;
            let now = r1 < a.cur_m[x as usize] && r2 < new_cw;
            if was != now {
                let d = if now { 1 } else { -1 };
                dnbp += d;
                s.add_m(x, d);
                s.add_w(y, d);
            }
        }
    }

    // ns can only change for persons whose marital status or blocking count
    // changed, and all of those are in the touched sets.
    let mut dns: i64 = 0;
    for i in 0..s.touched_m.len() {
        let x = s.touched_m[i];
        let was_single = cur.wife_raw(x) == 0;
        let now_single = if x == m {
            false
        } else if x == om {
            true
        } else {
            was_single
        };
        let old_bc = i64::from(a.bc_m[x as usize]);
        let new_bc = old_bc + s.delta_m[x as usize];
        dns += i64::from(now_single && new_bc == 0) - i64::from(was_single && old_bc == 0);
    }
    for i in 0..s.touched_w.len() {
        let y = s.touched_w[i];
        let was_single = cur.husband_raw(y) == 0;
        let now_single = if y == w {
            false
        } else if y == ow {
            true
        } else {
            was_single
        };
        let old_bc = i64::from(a.bc_w[y as usize]);
        let new_bc = old_bc + s.delta_w[y as usize];
        dns += i64::from(now_single && new_bc == 0) - i64::from(was_single && old_bc == 0);
    }

    Evaluation {
        nbp: (a.nbp as i64 + dnbp) as usize,
        ns: (a.ns as i64 + dns) as usize,
    }
}

fn select_best(
    inst: &Instance,
    cur: &Matching,
    a: &Analysis,
    s: &mut DeltaScratch,
    minima: &mut Vec<usize>,
    pairs: &[BlockingPair],
    rng: &mut SearchRng,
) -> BlockingPair {
    debug_assert!(!pairs.is_empty());
    minima.clear();
    let mut best_f = usize::MAX;
    for (i, &bp) in pairs.iter().enumerate() {
        let f = neighbor_eval(inst, cur, a, s, bp).f();
        if f < best_f {
            best_f = f;
            minima.clear();
            minima.push(i);
        } else if f == best_f {
            minima.push(i);
        }
    }
    let pick = if minima.len() == 1 {
        minima[0]
    } else {
        minima[rng.random_range(0..minima.len())]
    };
    pairs[pick]
}
