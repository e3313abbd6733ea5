//! Problem instances: two sides of `n` persons, each with a preference list over
//! an acceptable subset of the other side. Lists are ordered tie-groups; rank 1 is
//! most preferred and every member of a group shares its group's rank.
//!
//! Instances are value types. Acceptability is symmetric by construction: `w` appears
//! in `m`'s list if and only if `m` appears in `w`'s list. The text format is line
//! oriented (`smti <n>` header, then one line per person) and round-trips exactly.

use std::fmt;

use thiserror::Error;

/// Which side of the market a person belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    /// The other side.
    pub fn opposite(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }
}

/// A person, identified by side and 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PersonId {
    pub side: Side,
    pub index: u32,
}

impl PersonId {
    pub fn man(index: u32) -> PersonId {
        PersonId { side: Side::Man, index }
    }

    pub fn woman(index: u32) -> PersonId {
        PersonId { side: Side::Woman, index }
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Man => write!(f, "man {}", self.index),
            Side::Woman => write!(f, "woman {}", self.index),
        }
    }
}

/// Outcome of comparing two potential partners from one person's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preference {
    /// The first candidate has strictly smaller rank (or the second is SINGLE).
    StrictlyPrefers,
    /// Both candidates share a tie-group.
    Indifferent,
    /// The first candidate has strictly larger rank.
    StrictlyDispreferred,
    /// Reserved for comparisons outside the acceptable set. [`Instance::prefers`]
    /// never returns it; such queries fail with [`InstanceError::NotAcceptable`].
    Incomparable,
}

/// Tie-group lists for one person, outermost index = rank - 1.
pub type Groups = Vec<Vec<u32>>;

/// A validated preference list: non-empty, duplicate-free tie-groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceList {
    groups: Vec<Vec<u32>>,
}

impl PreferenceList {
    /// Tie-groups in rank order; each inner slice is non-empty.
    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    /// Number of tie-groups (the largest rank attained).
    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Total number of acceptable candidates.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Candidates in list order (rank-major, then group order as written).
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.groups.iter().flatten().copied()
    }
}

/// Semantic violations in instance data.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance size must be at least 1")]
    ZeroSize,
    #[error("expected {expected} preference lists for {side:?}, got {got}")]
    WrongListCount { side: Side, expected: usize, got: usize },
    #[error("{person} has an empty preference list")]
    EmptyList { person: PersonId },
    #[error("{person} has an empty tie-group")]
    EmptyTieGroup { person: PersonId },
    #[error("{person} lists candidate {candidate} more than once")]
    DuplicateCandidate { person: PersonId, candidate: u32 },
    #[error("{person} lists candidate {candidate}, outside 1..={n}")]
    CandidateOutOfRange { person: PersonId, candidate: u32, n: usize },
    #[error("asymmetric acceptability between man {man} and woman {woman}")]
    AsymmetricAcceptability { man: u32, woman: u32 },
    #[error("{person} does not find candidate {candidate} acceptable")]
    NotAcceptable { person: PersonId, candidate: u32 },
}

/// Errors from reading the text format.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] InstanceError),
}

/// A complete two-sided instance with dense rank tables.
///
/// Ranks are 1-based and dense: for every person the attained ranks are exactly
/// `1..=G` where `G` is that person's number of tie-groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    // Index 0 unused on every per-person axis; persons are 1-based throughout.
    men: Vec<PreferenceList>,
    women: Vec<PreferenceList>,
    // Flat (n+1)*(n+1) tables, 0 = unacceptable.
    men_rank: Vec<u32>,
    women_rank: Vec<u32>,
    // Acceptable partners as (partner, own rank of partner), ascending by partner.
    men_adj: Vec<Vec<(u32, u32)>>,
    women_adj: Vec<Vec<(u32, u32)>>,
}

impl Instance {
    /// Build and validate an instance from per-person tie-group lists.
    ///
    /// `men[i]` and `women[i]` hold the lists of man `i+1` and woman `i+1`.
    pub fn new(n: usize, men: Vec<Groups>, women: Vec<Groups>) -> Result<Instance, InstanceError> {
        if n == 0 {
            return Err(InstanceError::ZeroSize);
        }
        if men.len() != n {
            return Err(InstanceError::WrongListCount { side: Side::Man, expected: n, got: men.len() });
        }
        if women.len() != n {
            return Err(InstanceError::WrongListCount { side: Side::Woman, expected: n, got: women.len() });
        }

        let men = validate_side(Side::Man, men, n)?;
        let women = validate_side(Side::Woman, women, n)?;

        let men_rank = rank_table(&men, n);
        let women_rank = rank_table(&women, n);

        // Symmetry: m lists w exactly when w lists m.
        for m in 1..=n {
            for w in 1..=n {
                let mw = men_rank[m * (n + 1) + w] != 0;
                let wm = women_rank[w * (n + 1) + m] != 0;
                if mw != wm {
                    return Err(InstanceError::AsymmetricAcceptability { man: m as u32, woman: w as u32 });
                }
            }
        }

        let men_adj = adjacency(&men_rank, n);
        let women_adj = adjacency(&women_rank, n);

        Ok(Instance { n, men, women, men_rank, women_rank, men_adj, women_adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The validated preference list of `p`.
    pub fn list(&self, p: PersonId) -> &PreferenceList {
        match p.side {
            Side::Man => &self.men[p.index as usize],
            Side::Woman => &self.women[p.index as usize],
        }
    }

    /// Rank of `candidate` in `p`'s list, or `None` if unacceptable.
    pub fn rank(&self, p: PersonId, candidate: u32) -> Option<u32> {
        let r = match p.side {
            Side::Man => self.rank_mw(p.index, candidate),
            Side::Woman => self.rank_wm(p.index, candidate),
        };
        (r != 0).then_some(r)
    }

    pub fn acceptable(&self, p: PersonId, candidate: u32) -> bool {
        self.rank(p, candidate).is_some()
    }

    /// Acceptable partners of `p`, ascending by index.
    pub fn partners(&self, p: PersonId) -> impl Iterator<Item = u32> + '_ {
        let adj = match p.side {
            Side::Man => &self.men_adj[p.index as usize],
            Side::Woman => &self.women_adj[p.index as usize],
        };
        adj.iter().map(|&(q, _)| q)
    }

    /// Compare candidates `a` and `b` (`None` = staying single) from `p`'s view.
    ///
    /// Any acceptable candidate is strictly preferred over being single.
    pub fn prefers(&self, p: PersonId, a: u32, b: Option<u32>) -> Result<Preference, InstanceError> {
        let ra = self
            .rank(p, a)
            .ok_or(InstanceError::NotAcceptable { person: p, candidate: a })?;
        let Some(b) = b else {
            return Ok(Preference::StrictlyPrefers);
        };
        let rb = self
            .rank(p, b)
            .ok_or(InstanceError::NotAcceptable { person: p, candidate: b })?;
        Ok(match ra.cmp(&rb) {
            std::cmp::Ordering::Less => Preference::StrictlyPrefers,
            std::cmp::Ordering::Equal => Preference::Indifferent,
            std::cmp::Ordering::Greater => Preference::StrictlyDispreferred,
        })
    }

    // Hot-path accessors; 0 means unacceptable.
    #[inline]
    pub(crate) fn rank_mw(&self, m: u32, w: u32) -> u32 {
        self.men_rank[m as usize * (self.n + 1) + w as usize]
    }

    #[inline]
    pub(crate) fn rank_wm(&self, w: u32, m: u32) -> u32 {
        self.women_rank[w as usize * (self.n + 1) + m as usize]
    }

    #[inline]
    pub(crate) fn adj_m(&self, m: u32) -> &[(u32, u32)] {
        &self.men_adj[m as usize]
    }

    #[inline]
    pub(crate) fn adj_w(&self, w: u32) -> &[(u32, u32)] {
        &self.women_adj[w as usize]
    }

    /// Parse the text format produced by [`Instance::to_text`].
    ///
    /// Grammar: a `smti <n>` header, then `n` lines `m <i>: <list>` and `n` lines
    /// `w <i>: <list>` with `i` ascending. A list item is either a bare index or a
    /// tie-group `(i1 i2 ... ik)` with k >= 2. Lines starting with `#` and blank
    /// lines are skipped. Reported line numbers are 1-based physical lines.
    pub fn parse(text: &str) -> Result<Instance, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines
            .next()
            .ok_or_else(|| syntax(0, "empty input, expected 'smti <n>' header"))?;
        let n = parse_header(header).ok_or_else(|| syntax(line, "expected 'smti <n>' header"))?;
        if n == 0 {
            return Err(InstanceError::ZeroSize.into());
        }

        let read_side = |side: Side, lines: &mut dyn Iterator<Item = (usize, &str)>| {
            let label = match side {
                Side::Man => 'm',
                Side::Woman => 'w',
            };
            let mut out: Vec<Groups> = Vec::with_capacity(n);
            for i in 1..=n {
                let (line, text) = lines
                    .next()
                    .ok_or_else(|| syntax(0, format!("missing line '{label} {i}: ...'")))?;
                let (head, rest) = text
                    .split_once(':')
                    .ok_or_else(|| syntax(line, format!("expected '{label} {i}: <list>'")))?;
                let mut head_tokens = head.split_whitespace();
                let ok = head_tokens.next() == Some(&label.to_string())
                    && head_tokens.next().and_then(|t| t.parse::<usize>().ok()) == Some(i)
                    && head_tokens.next().is_none();
                if !ok {
                    return Err(syntax(line, format!("expected '{label} {i}: <list>'")));
                }
                out.push(parse_groups(rest, line)?);
            }
            Ok(out)
        };

        let men = read_side(Side::Man, &mut lines)?;
        let women = read_side(Side::Woman, &mut lines)?;
        if let Some((line, _)) = lines.next() {
            return Err(syntax(line, "unexpected content after the last preference list"));
        }
        Ok(Instance::new(n, men, women)?)
    }

    /// Serialize to the canonical text format (ASCII, LF, trailing newline).
    pub fn to_text(&self) -> String {
        let mut out = format!("smti {}\n", self.n);
        for (label, lists) in [('m', &self.men), ('w', &self.women)] {
            for i in 1..=self.n {
                out.push(label);
                out.push(' ');
                out.push_str(&i.to_string());
                out.push(':');
                for group in lists[i].groups() {
                    out.push(' ');
                    if group.len() == 1 {
                        out.push_str(&group[0].to_string());
                    } else {
                        out.push('(');
                        for (k, c) in group.iter().enumerate() {
                            if k > 0 {
                                out.push(' ');
                            }
                            out.push_str(&c.to_string());
                        }
                        out.push(')');
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

fn validate_side(side: Side, lists: Vec<Groups>, n: usize) -> Result<Vec<PreferenceList>, InstanceError> {
    // Slot 0 is a placeholder so persons index 1-based.
    let mut out = vec![PreferenceList { groups: vec![] }; 1];
    for (i, groups) in lists.into_iter().enumerate() {
        let person = PersonId { side, index: (i + 1) as u32 };
        if groups.iter().map(Vec::len).sum::<usize>() == 0 {
            return Err(InstanceError::EmptyList { person });
        }
        let mut seen = vec![false; n + 1];
        for group in &groups {
            if group.is_empty() {
                return Err(InstanceError::EmptyTieGroup { person });
            }
            for &c in group {
                if c == 0 || c as usize > n {
                    return Err(InstanceError::CandidateOutOfRange { person, candidate: c, n });
                }
                if seen[c as usize] {
                    return Err(InstanceError::DuplicateCandidate { person, candidate: c });
                }
                seen[c as usize] = true;
            }
        }
        out.push(PreferenceList { groups });
    }
    Ok(out)
}

fn rank_table(lists: &[PreferenceList], n: usize) -> Vec<u32> {
    let mut table = vec![0u32; (n + 1) * (n + 1)];
    for (i, list) in lists.iter().enumerate().skip(1) {
        for (g, group) in list.groups().iter().enumerate() {
            for &c in group {
                table[i * (n + 1) + c as usize] = (g + 1) as u32;
            }
        }
    }
    table
}

fn adjacency(rank: &[u32], n: usize) -> Vec<Vec<(u32, u32)>> {
    (0..=n)
        .map(|i| {
            (1..=n)
                .filter_map(|q| {
                    let r = rank[i * (n + 1) + q];
                    (r != 0).then_some((q as u32, r))
                })
                .collect()
        })
        .collect()
}

fn parse_header(line: &str) -> Option<usize> {
    let mut tokens = line.split_whitespace();
    let n = match (tokens.next()?, tokens.next()?) {
        ("smti", v) => v.parse().ok()?,
        _ => return None,
    };
    tokens.next().is_none().then_some(n)
}

fn parse_groups(text: &str, line: usize) -> Result<Groups, ParseError> {
    let mut groups: Groups = Vec::new();
    let mut open: Option<Vec<u32>> = None;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ch if ch.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                if open.is_some() {
                    return Err(syntax(line, "nested '(' in tie-group"));
                }
                open = Some(Vec::new());
            }
            ')' => {
                chars.next();
                match open.take() {
                    Some(group) if group.len() >= 2 => groups.push(group),
                    Some(_) => return Err(syntax(line, "tie-group needs at least two entries")),
                    None => return Err(syntax(line, "')' without matching '('")),
                }
            }
            ch if ch.is_ascii_digit() => {
                let mut v: u32 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d))
                        .ok_or_else(|| syntax(line, "index out of range"))?;
                    chars.next();
                }
                match &mut open {
                    Some(group) => group.push(v),
                    None => groups.push(vec![v]),
                }
            }
            ch => return Err(syntax(line, format!("unexpected character {ch:?}"))),
        }
    }
    if open.is_some() {
        return Err(syntax(line, "unclosed tie-group"));
    }
    Ok(groups)
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}
