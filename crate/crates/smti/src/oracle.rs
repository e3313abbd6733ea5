//! Exact ground truth for small instances: exhaustive enumeration of matchings
//! and stable marriages, plus a tie-broken deferred-acceptance baseline.
//!
//! Enumeration cost grows super-exponentially; callers pass an explicit size cap
//! and get an error instead of a surprise multi-hour run.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::instance::{Instance, PersonId};
use crate::localsearch::SearchRng;
use crate::matching::{is_stable, Matching};

/// Largest size the exhaustive routines are meant for.
pub const DEFAULT_SIZE_CAP: usize = 8;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance size {n} exceeds the exhaustive-enumeration cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
}

/// Everything the enumeration learns about an instance's stable marriages.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// All weakly stable marriages, in enumeration order.
    pub all_stable: Vec<Matching>,
    /// Size of the largest weakly stable marriage.
    pub max_size: usize,
    /// Stable-marriage count per size.
    pub count_by_size: BTreeMap<usize, usize>,
}

/// Every matching of the instance (all assignments of men to single or an
/// unused acceptable woman). Intended for `n <= 7`; see [`enumerate_stable`]
/// for a variant that does not materialize the full list.
pub fn all_matchings(inst: &Instance, size_cap: usize) -> Result<Vec<Matching>, OracleError> {
    let mut out = Vec::new();
    for_each_matching(inst, size_cap, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Enumerate all matchings, keep the weakly stable ones, and summarize.
pub fn enumerate_stable(inst: &Instance, size_cap: usize) -> Result<OracleReport, OracleError> {
    let mut all_stable = Vec::new();
    for_each_matching(inst, size_cap, |m| {
        if is_stable(inst, m) {
            all_stable.push(m.clone());
        }
    })?;
    let mut count_by_size = BTreeMap::new();
    for m in &all_stable {
        *count_by_size.entry(m.size()).or_insert(0) += 1;
    }
    let max_size = all_stable.iter().map(Matching::size).max().unwrap_or(0);
    Ok(OracleReport { all_stable, max_size, count_by_size })
}

/// Size of the largest weakly stable marriage.
pub fn max_stable_size(inst: &Instance, size_cap: usize) -> Result<usize, OracleError> {
    Ok(enumerate_stable(inst, size_cap)?.max_size)
}

/// Break every tie uniformly at random (seeded), then run man-proposing
/// deferred acceptance on the strict lists.
///
/// The result is stable for the refined strict instance, hence weakly stable
/// for the original: a strict preference survives any tie refinement.
pub fn gale_shapley_tiebroken(inst: &Instance, tie_break_seed: u64) -> Matching {
    let n = inst.n();
    let mut rng = SearchRng::seed_from_u64(tie_break_seed);

    // Refined strict lists; draw order is men 1..n then women 1..n.
    let refine = |p: PersonId, rng: &mut SearchRng| -> Vec<u32> {
        let mut strict = Vec::with_capacity(inst.list(p).len());
        for group in inst.list(p).groups() {
            let start = strict.len();
            strict.extend_from_slice(group);
            strict[start..].shuffle(rng);
        }
        strict
    };
    let men_strict: Vec<Vec<u32>> = (0..=n as u32)
        .map(|m| if m == 0 { vec![] } else { refine(PersonId::man(m), &mut rng) })
        .collect();
    let women_strict: Vec<Vec<u32>> = (0..=n as u32)
        .map(|w| if w == 0 { vec![] } else { refine(PersonId::woman(w), &mut rng) })
        .collect();

    // women_pos[w][m]: position of m in w's strict list, lower is better.
    let mut women_pos = vec![vec![u32::MAX; n + 1]; n + 1];
    for w in 1..=n {
        for (pos, &m) in women_strict[w].iter().enumerate() {
            women_pos[w][m as usize] = pos as u32;
        }
    }

    let mut matching = Matching::empty(n);
    let mut next = vec![0usize; n + 1];
    let mut free: Vec<u32> = (1..=n as u32).rev().collect();
    while let Some(man) = free.pop() {
        loop {
            let Some(&woman) = men_strict[man as usize].get(next[man as usize]) else {
                break; // list exhausted, man stays single
            };
            next[man as usize] += 1;
            match matching.husband_of(woman) {
                None => {
                    matching.set_pair(man, woman);
                    break;
                }
                Some(current) => {
                    if women_pos[woman as usize][man as usize]
                        < women_pos[woman as usize][current as usize]
                    {
                        matching.clear_pair(current, woman);
                        matching.set_pair(man, woman);
                        free.push(current);
                        break;
                    }
                }
            }
        }
    }
    matching
}

fn for_each_matching(
    inst: &Instance,
    size_cap: usize,
    mut visit: impl FnMut(&Matching),
) -> Result<(), OracleError> {
    let n = inst.n();
    if n > size_cap {
        return Err(OracleError::SizeCapExceeded { n, cap: size_cap });
    }
    let mut used = vec![false; n + 1];
    let mut cur = Matching::empty(n);
    recurse(inst, 1, &mut used, &mut cur, &mut visit);
    Ok(())
}

fn recurse(
    inst: &Instance,
    man: u32,
    used: &mut Vec<bool>,
    cur: &mut Matching,
    visit: &mut impl FnMut(&Matching),
) {
    if man as usize > inst.n() {
        visit(cur);
        return;
    }
    // Man stays single.
    recurse(inst, man + 1, used, cur, visit);
    for w in inst.partners(PersonId::man(man)).collect::<Vec<_>>() {
        if !used[w as usize] {
            used[w as usize] = true;
            cur.set_pair(man, w);
            recurse(inst, man + 1, used, cur, visit);
            cur.clear_pair(man, w);
            used[w as usize] = false;
        }
    }
}
