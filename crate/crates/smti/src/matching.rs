//! Marriages and their quality: blocking pairs, weak stability, the evaluation
//! function guiding the search, and the one-pair neighbor move.
//!
//! A marriage is a partial one-to-one matching between mutually acceptable
//! persons. A pair (m, w) blocks a marriage when both are acceptable to each
//! other and each is either single or strictly prefers the other to their
//! current partner; a marriage is weakly stable when nothing blocks it.

use std::fmt;

use thiserror::Error;

use crate::instance::{Instance, PersonId, Side};

/// A partial one-to-one matching; persons are 1-based, 0 encodes "single".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    wife: Vec<u32>,
    husband: Vec<u32>,
    size: usize,
}

/// A man/woman pair claimed to block some marriage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockingPair {
    pub man: u32,
    pub woman: u32,
}

impl fmt::Display for BlockingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m{}, w{})", self.man, self.woman)
    }
}

/// Marriage quality: blocking-pair count plus uncovered singles.
///
/// `f() == 0` exactly when the marriage is weakly stable and perfect; among
/// stable marriages `f` equals the total number of singles on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    /// Number of blocking pairs.
    pub nbp: usize,
    /// Singles (both sides) that appear in no blocking pair.
    pub ns: usize,
}

impl Evaluation {
    pub fn f(&self) -> usize {
        self.nbp + self.ns
    }
}

/// Violations of matching structure or of move preconditions.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("{person} is outside 1..={n}")]
    PersonOutOfRange { person: PersonId, n: usize },
    #[error("{person} appears in more than one pair")]
    AlreadyMatched { person: PersonId },
    #[error("man {man} and woman {woman} are not mutually acceptable")]
    NotMutuallyAcceptable { man: u32, woman: u32 },
    #[error("{pair} does not block this marriage")]
    NotBlocking { pair: BlockingPair },
    #[error("malformed matching text: {msg}")]
    Syntax { msg: String },
}

impl Matching {
    /// The all-single marriage on `n` persons per side.
    pub fn empty(n: usize) -> Matching {
        Matching { wife: vec![0; n + 1], husband: vec![0; n + 1], size: 0 }
    }

    /// Build from explicit (man, woman) pairs, validating structure and
    /// mutual acceptability against `inst`.
    pub fn from_pairs(inst: &Instance, pairs: &[(u32, u32)]) -> Result<Matching, MatchingError> {
        let n = inst.n();
        let mut out = Matching::empty(n);
        for &(m, w) in pairs {
            if m == 0 || m as usize > n {
                return Err(MatchingError::PersonOutOfRange { person: PersonId::man(m), n });
            }
            if w == 0 || w as usize > n {
                return Err(MatchingError::PersonOutOfRange { person: PersonId::woman(w), n });
            }
            if out.wife[m as usize] != 0 {
                return Err(MatchingError::AlreadyMatched { person: PersonId::man(m) });
            }
            if out.husband[w as usize] != 0 {
                return Err(MatchingError::AlreadyMatched { person: PersonId::woman(w) });
            }
            if inst.rank_mw(m, w) == 0 {
                return Err(MatchingError::NotMutuallyAcceptable { man: m, woman: w });
            }
            out.wife[m as usize] = w;
            out.husband[w as usize] = m;
            out.size += 1;
        }
        Ok(out)
    }

    /// Parse the row form `<w(1)> ... <w(n)>` with `-` for single men.
    pub fn from_row(inst: &Instance, text: &str) -> Result<Matching, MatchingError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != inst.n() {
            return Err(MatchingError::Syntax {
                msg: format!("expected {} entries, got {}", inst.n(), tokens.len()),
            });
        }
        let mut pairs = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if *tok == "-" {
                continue;
            }
            let w: u32 = tok
                .parse()
                .map_err(|_| MatchingError::Syntax { msg: format!("bad entry {tok:?}") })?;
            pairs.push((i as u32 + 1, w));
        }
        Matching::from_pairs(inst, &pairs)
    }

    /// Row form: wife of each man in index order, `-` for singles.
    pub fn to_row(&self) -> String {
        let cells: Vec<String> = self.wife[1..]
            .iter()
            .map(|&w| if w == 0 { "-".into() } else { w.to_string() })
            .collect();
        cells.join(" ")
    }

    /// Block form: a `match` line, then `m <i> w <j>` per pair and
    /// `single m <i>` / `single w <j>` per single, all ascending.
    pub fn to_block(&self) -> String {
        let mut out = String::from("match\n");
        for (m, w) in self.pairs() {
            out.push_str(&format!("m {m} w {w}\n"));
        }
        for m in 1..=self.n() {
            if self.wife[m] == 0 {
                out.push_str(&format!("single m {m}\n"));
            }
        }
        for w in 1..=self.n() {
            if self.husband[w] == 0 {
                out.push_str(&format!("single w {w}\n"));
            }
        }
        out
    }

    /// Parse the block form produced by [`Matching::to_block`].
    pub fn from_block(inst: &Instance, text: &str) -> Result<Matching, MatchingError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("match") {
            return Err(MatchingError::Syntax { msg: "expected leading 'match' line".into() });
        }
        let mut pairs = Vec::new();
        let mut singles: Vec<PersonId> = Vec::new();
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parse_idx = |t: &str| t.parse::<u32>().ok();
            match tokens.as_slice() {
                ["m", m, "w", w] => match (parse_idx(m), parse_idx(w)) {
                    (Some(m), Some(w)) => pairs.push((m, w)),
                    _ => return Err(MatchingError::Syntax { msg: format!("bad pair line {line:?}") }),
                },
                ["single", "m", i] if parse_idx(i).is_some() => {
                    singles.push(PersonId::man(parse_idx(i).unwrap()));
                }
                ["single", "w", i] if parse_idx(i).is_some() => {
                    singles.push(PersonId::woman(parse_idx(i).unwrap()));
                }
                _ => return Err(MatchingError::Syntax { msg: format!("bad line {line:?}") }),
            }
        }
        let out = Matching::from_pairs(inst, &pairs)?;
        for p in singles {
            if out.partner(p).is_some() {
                return Err(MatchingError::Syntax {
                    msg: format!("{p} is listed single but has a partner"),
                });
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.wife.len() - 1
    }

    /// Number of matched pairs.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Unmatched persons per side (`n - size`).
    pub fn singles_per_side(&self) -> usize {
        self.n() - self.size
    }

    pub fn wife_of(&self, m: u32) -> Option<u32> {
        let w = self.wife[m as usize];
        (w != 0).then_some(w)
    }

    pub fn husband_of(&self, w: u32) -> Option<u32> {
        let m = self.husband[w as usize];
        (m != 0).then_some(m)
    }

    pub fn partner(&self, p: PersonId) -> Option<u32> {
        match p.side {
            Side::Man => self.wife_of(p.index),
            Side::Woman => self.husband_of(p.index),
        }
    }

    pub fn is_single(&self, p: PersonId) -> bool {
        self.partner(p).is_none()
    }

    /// Matched pairs ascending by man index.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.wife
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(m, &w)| (w != 0).then_some((m as u32, w)))
    }

    // Marry a currently free pair. Hot path; callers uphold freeness.
    pub(crate) fn set_pair(&mut self, m: u32, w: u32) {
        debug_assert!(self.wife[m as usize] == 0 && self.husband[w as usize] == 0);
        self.wife[m as usize] = w;
        self.husband[w as usize] = m;
        self.size += 1;
    }

    // Undo of set_pair; callers uphold that m and w are married to each other.
    pub(crate) fn clear_pair(&mut self, m: u32, w: u32) {
        debug_assert!(self.wife[m as usize] == w && self.husband[w as usize] == m);
        self.wife[m as usize] = 0;
        self.husband[w as usize] = 0;
        self.size -= 1;
    }

    // The neighbor move: marry bp, dropping both previous partners.
    pub(crate) fn apply_removal(&mut self, bp: BlockingPair) {
        let (m, w) = (bp.man as usize, bp.woman as usize);
        let ow = self.wife[m];
        if ow != 0 {
            self.husband[ow as usize] = 0;
            self.size -= 1;
        }
        let om = self.husband[w];
        if om != 0 {
            self.wife[om as usize] = 0;
            self.size -= 1;
        }
        self.wife[m] = w as u32;
        self.husband[w] = m as u32;
        self.size += 1;
    }

    // Wife of m as raw index, 0 = single.
    #[inline]
    pub(crate) fn wife_raw(&self, m: u32) -> u32 {
        self.wife[m as usize]
    }

    #[inline]
    pub(crate) fn husband_raw(&self, w: u32) -> u32 {
        self.husband[w as usize]
    }
}

/// Does `(bp.man, bp.woman)` block `m`?
pub fn is_blocking(inst: &Instance, m: &Matching, bp: BlockingPair) -> bool {
    let r1 = inst.rank_mw(bp.man, bp.woman);
    if r1 == 0 {
        return false;
    }
    let wife = m.wife_raw(bp.man);
    if wife != 0 && inst.rank_mw(bp.man, wife) <= r1 {
        return false;
    }
    let r2 = inst.rank_wm(bp.woman, bp.man);
    let husband = m.husband_raw(bp.woman);
    husband == 0 || inst.rank_wm(bp.woman, husband) > r2
}

/// All blocking pairs of `m`, ascending by man then woman.
pub fn blocking_pairs(inst: &Instance, m: &Matching) -> Vec<BlockingPair> {
    let mut analysis = Analysis::default();
    analyze_into(inst, m, &mut analysis);
    analysis.blocking
}

/// Weak stability: no blocking pair exists.
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    for man in 1..=inst.n() as u32 {
        let wife = m.wife_raw(man);
        let cm = if wife == 0 { u32::MAX } else { inst.rank_mw(man, wife) };
        for &(w, r1) in inst.adj_m(man) {
            if r1 < cm {
                let husband = m.husband_raw(w);
                if husband == 0 || inst.rank_wm(w, husband) > inst.rank_wm(w, man) {
                    return false;
                }
            }
        }
    }
    true
}

/// Does `m` marry everyone?
pub fn is_perfect(m: &Matching) -> bool {
    m.size() == m.n()
}

/// The search objective: blocking pairs plus uncovered singles.
pub fn evaluate(inst: &Instance, m: &Matching) -> Evaluation {
    let mut analysis = Analysis::default();
    analyze_into(inst, m, &mut analysis);
    Evaluation { nbp: analysis.nbp, ns: analysis.ns }
}

/// Marry the blocking pair `bp` in a copy of `m`; both previous partners
/// (if any) become single, everyone else keeps their partner.
pub fn remove_blocking_pair(
    inst: &Instance,
    m: &Matching,
    bp: BlockingPair,
) -> Result<Matching, MatchingError> {
    if !is_blocking(inst, m, bp) {
        return Err(MatchingError::NotBlocking { pair: bp });
    }
    let mut out = m.clone();
    out.apply_removal(bp);
    Ok(out)
}

/// Blocking pairs that survive dominance filtering, `first` side filtered first.
///
/// The first pass keeps, for each person on `first`'s side, only their
/// minimal-rank blocking partners; the second pass repeats this for the other
/// side among the survivors. Output order matches [`blocking_pairs`].
pub fn undominated_blocking_pairs(inst: &Instance, m: &Matching, first: Side) -> Vec<BlockingPair> {
    let blocking = blocking_pairs(inst, m);
    let mut out = Vec::new();
    dominance_filter_into(inst, &blocking, first, &mut out);
    out
}

// Per-marriage scan products shared by the public queries and the search:
// the blocking list, per-person blocking counts, and current-partner ranks
// (u32::MAX for singles).
#[derive(Clone, Debug, Default)]
pub(crate) struct Analysis {
    pub blocking: Vec<BlockingPair>,
    pub bc_m: Vec<u32>,
    pub bc_w: Vec<u32>,
    pub cur_m: Vec<u32>,
    pub cur_w: Vec<u32>,
    pub nbp: usize,
    pub ns: usize,
}

impl Analysis {
    pub(crate) fn f(&self) -> usize {
        self.nbp + self.ns
    }
}

pub(crate) fn analyze_into(inst: &Instance, m: &Matching, out: &mut Analysis) {
    let n = inst.n();
    out.blocking.clear();
    out.bc_m.clear();
    out.bc_m.resize(n + 1, 0);
    out.bc_w.clear();
    out.bc_w.resize(n + 1, 0);
    out.cur_m.clear();
    out.cur_m.resize(n + 1, u32::MAX);
    out.cur_w.clear();
    out.cur_w.resize(n + 1, u32::MAX);

    for man in 1..=n as u32 {
        let wife = m.wife_raw(man);
        if wife != 0 {
            out.cur_m[man as usize] = inst.rank_mw(man, wife);
        }
    }
    for w in 1..=n as u32 {
        let husband = m.husband_raw(w);
        if husband != 0 {
            out.cur_w[w as usize] = inst.rank_wm(w, husband);
        }
    }

    for man in 1..=n as u32 {
        let cm = out.cur_m[man as usize];
        for &(w, r1) in inst.adj_m(man) {
            if r1 < cm && inst.rank_wm(w, man) < out.cur_w[w as usize] {
                out.blocking.push(BlockingPair { man, woman: w });
                out.bc_m[man as usize] += 1;
                out.bc_w[w as usize] += 1;
            }
        }
    }
    out.nbp = out.blocking.len();

    out.ns = 0;
    for i in 1..=n {
        if m.wife[i] == 0 && out.bc_m[i] == 0 {
            out.ns += 1;
        }
        if m.husband[i] == 0 && out.bc_w[i] == 0 {
            out.ns += 1;
        }
    }
}

// Dominance filtering over an already-computed blocking list, preserving order.
pub(crate) fn dominance_filter_into(
    inst: &Instance,
    blocking: &[BlockingPair],
    first: Side,
    out: &mut Vec<BlockingPair>,
) {
    let n = inst.n();
    out.clear();
    out.extend_from_slice(blocking);
    let mut min_rank = vec![u32::MAX; n + 1];

    let pass = |side: Side, pairs: &mut Vec<BlockingPair>, min_rank: &mut Vec<u32>| {
        min_rank.iter_mut().for_each(|r| *r = u32::MAX);
        let rank_of = |bp: &BlockingPair| match side {
            Side::Man => (bp.man as usize, inst.rank_mw(bp.man, bp.woman)),
            Side::Woman => (bp.woman as usize, inst.rank_wm(bp.woman, bp.man)),
        };
        for bp in pairs.iter() {
            let (i, r) = rank_of(bp);
            if r < min_rank[i] {
                min_rank[i] = r;
            }
        }
        pairs.retain(|bp| {
            let (i, r) = rank_of(bp);
            r == min_rank[i]
        });
    };

    pass(first, out, &mut min_rank);
    pass(first.opposite(), out, &mut min_rank);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::Preference;

    fn bp(man: u32, woman: u32) -> BlockingPair {
        BlockingPair { man, woman }
    }

    // Independent route to the blocking set: positional scans over the raw
    // tie-group lists, no rank tables or adjacency involved.
    fn naive_blocking(inst: &Instance, m: &Matching) -> Vec<BlockingPair> {
        let pos = |p: PersonId, c: u32| -> Option<usize> {
            inst.list(p).groups().iter().position(|g| g.contains(&c))
        };
        let mut out = Vec::new();
        for man in 1..=inst.n() as u32 {
            for woman in 1..=inst.n() as u32 {
                let (pm, pw) = (PersonId::man(man), PersonId::woman(woman));
                let (Some(rw), Some(rm)) = (pos(pm, woman), pos(pw, man)) else {
                    continue;
                };
                let man_wants = match m.wife_of(man) {
                    None => true,
                    Some(cur) => rw < pos(pm, cur).unwrap(),
                };
                let woman_wants = match m.husband_of(woman) {
                    None => true,
                    Some(cur) => rm < pos(pw, cur).unwrap(),
                };
                if man_wants && woman_wants {
                    out.push(bp(man, woman));
                }
            }
        }
        out
    }

    #[test]
    fn size_counts_pairs() {
        let inst = fixtures::example4();
        let perfect = Matching::from_row(&inst, "2 3 1 4").unwrap();
        assert_eq!(perfect.size(), 4);
        assert_eq!(Matching::empty(4).size(), 0);
        let one = Matching::from_pairs(&inst, &[(1, 2)]).unwrap();
        assert_eq!(one.size(), 1);
        assert_eq!(one.singles_per_side(), 3);
    }

    #[test]
    fn row_form_round_trips() {
        let inst = fixtures::example4();
        for row in ["2 3 1 4", "- 3 1 -", "- - - -"] {
            let m = Matching::from_row(&inst, row).unwrap();
            assert_eq!(m.to_row(), row);
        }
        assert!(matches!(
            Matching::from_row(&inst, "2 3 1"),
            Err(MatchingError::Syntax { .. })
        ));
        // w2 is not acceptable to m3.
        assert!(matches!(
            Matching::from_row(&inst, "1 3 2 4"),
            Err(MatchingError::NotMutuallyAcceptable { man: 3, woman: 2 })
        ));
    }

    #[test]
    fn block_form_round_trips() {
        let inst = fixtures::example4();
        let m = Matching::from_row(&inst, "- 3 1 -").unwrap();
        let text = m.to_block();
        assert_eq!(text, "match\nm 2 w 3\nm 3 w 1\nsingle m 1\nsingle m 4\nsingle w 2\nsingle w 4\n");
        assert_eq!(Matching::from_block(&inst, &text).unwrap(), m);
        assert!(Matching::from_block(&inst, "m 1 w 2\n").is_err());
    }

    #[test]
    fn from_pairs_rejects_structure_violations() {
        let inst = fixtures::example4();
        assert!(matches!(
            Matching::from_pairs(&inst, &[(1, 2), (1, 1)]),
            Err(MatchingError::AlreadyMatched { .. })
        ));
        assert!(matches!(
            Matching::from_pairs(&inst, &[(1, 2), (4, 2)]),
            Err(MatchingError::AlreadyMatched { .. })
        ));
        assert!(matches!(
            Matching::from_pairs(&inst, &[(5, 1)]),
            Err(MatchingError::PersonOutOfRange { .. })
        ));
    }

    #[test]
    fn stable_perfect_marriage_has_no_blocking_pairs() {
        let inst = fixtures::example4();
        let m = Matching::from_row(&inst, "2 3 1 4").unwrap();
        assert_eq!(blocking_pairs(&inst, &m), vec![]);
        assert!(is_stable(&inst, &m));
        assert!(is_perfect(&m));
        assert_eq!(evaluate(&inst, &m), Evaluation { nbp: 0, ns: 0 });
    }

    #[test]
    fn identity_marriage_has_two_blocking_pairs() {
        let inst = fixtures::example4();
        let m = Matching::from_row(&inst, "1 2 3 4").unwrap();
        let expected = vec![bp(1, 2), bp(4, 2)];
        assert_eq!(blocking_pairs(&inst, &m), expected);
        assert_eq!(naive_blocking(&inst, &m), expected);
        assert!(!is_stable(&inst, &m));
        assert!(is_perfect(&m));
        assert_eq!(evaluate(&inst, &m), Evaluation { nbp: 2, ns: 0 });
    }

    #[test]
    fn empty_marriage_is_blocked_by_every_acceptable_pair() {
        let inst = fixtures::example4();
        let m = Matching::empty(4);
        let expected = vec![
            bp(1, 1),
            bp(1, 2),
            bp(2, 2),
            bp(2, 3),
            bp(2, 4),
            bp(3, 1),
            bp(3, 3),
            bp(3, 4),
            bp(4, 1),
            bp(4, 2),
            bp(4, 3),
            bp(4, 4),
        ];
        assert_eq!(blocking_pairs(&inst, &m), expected);
        assert_eq!(naive_blocking(&inst, &m), expected);
        // Every single is in some blocking pair, so none is counted by ns.
        assert_eq!(evaluate(&inst, &m), Evaluation { nbp: 12, ns: 0 });

        let minimal = fixtures::minimal1();
        assert!(!is_stable(&minimal, &Matching::empty(1)));
    }

    #[test]
    fn blocking_matches_naive_on_assorted_marriages() {
        let inst = fixtures::example4();
        for row in ["- - - -", "2 3 1 4", "1 2 3 4", "- 3 1 -", "2 - - 3", "1 - 4 2"] {
            let m = Matching::from_row(&inst, row).unwrap();
            assert_eq!(blocking_pairs(&inst, &m), naive_blocking(&inst, &m), "row {row}");
            assert_eq!(is_stable(&inst, &m), naive_blocking(&inst, &m).is_empty(), "row {row}");
        }
    }

    #[test]
    fn evaluation_counts_uncovered_singles() {
        // m1-w1 leaves m2, w2 single; (m2, w2) blocks, so both are covered.
        let forced = fixtures::forced2();
        let m = Matching::from_row(&forced, "1 -").unwrap();
        assert_eq!(evaluate(&forced, &m), Evaluation { nbp: 1, ns: 0 });

        // m2-w1 is stable but leaves m1 and w2 single and uncovered.
        let m = Matching::from_pairs(&forced, &[(2, 1)]).unwrap();
        assert_eq!(blocking_pairs(&forced, &m), vec![]);
        assert_eq!(evaluate(&forced, &m), Evaluation { nbp: 0, ns: 2 });
    }

    #[test]
    fn remove_blocking_pair_marries_the_pair() {
        let inst = fixtures::example4();
        let m = Matching::from_row(&inst, "1 2 3 4").unwrap();

        let a = remove_blocking_pair(&inst, &m, bp(1, 2)).unwrap();
        assert_eq!(a.to_row(), "2 - 3 4");
        assert_eq!(a.size(), 3);

        let b = remove_blocking_pair(&inst, &m, bp(4, 2)).unwrap();
        assert_eq!(b.to_row(), "1 - 3 2");

        // Marrying two singles only adds a pair.
        let partial = Matching::from_pairs(&inst, &[(3, 3)]).unwrap();
        let c = remove_blocking_pair(&inst, &partial, bp(2, 2)).unwrap();
        assert_eq!(c.to_row(), "- 2 3 -");

        assert!(matches!(
            remove_blocking_pair(&inst, &m, bp(2, 4)),
            Err(MatchingError::NotBlocking { .. })
        ));
    }

    #[test]
    fn taking_a_partner_away_makes_them_single() {
        let inst = fixtures::example4();
        // w3 prefers m2 over her current m3; m3 drops to single.
        let m = Matching::from_pairs(&inst, &[(3, 3)]).unwrap();
        let out = remove_blocking_pair(&inst, &m, bp(2, 3)).unwrap();
        assert_eq!(out.to_row(), "- 3 - -");
        assert!(out.is_single(PersonId::man(3)));
    }

    #[test]
    fn dominance_filter_keeps_best_ranked_pairs() {
        let inst = fixtures::example4();
        let m = Matching::from_row(&inst, "1 2 3 4").unwrap();
        // w2 prefers m1 (rank 1) to m4 (rank 2), so the women's pass drops (4, 2).
        assert_eq!(undominated_blocking_pairs(&inst, &m, Side::Man), vec![bp(1, 2)]);
        assert_eq!(undominated_blocking_pairs(&inst, &m, Side::Woman), vec![bp(1, 2)]);

        let stable = Matching::from_row(&inst, "2 3 1 4").unwrap();
        assert_eq!(undominated_blocking_pairs(&inst, &stable, Side::Man), vec![]);

        // Check the two-pass semantics against the pairwise definition.
        let empty = Matching::empty(4);
        let all = blocking_pairs(&inst, &empty);
        let men_filtered = undominated_blocking_pairs(&inst, &empty, Side::Man);
        for kept in &men_filtered {
            for other in &all {
                if other.man == kept.man {
                    let pref = inst
                        .prefers(PersonId::man(kept.man), other.woman, Some(kept.woman))
                        .unwrap();
                    assert_ne!(pref, Preference::StrictlyPrefers, "{kept} dominated by {other}");
                }
            }
        }
        assert!(men_filtered.iter().all(|p| all.contains(p)));
    }
}
