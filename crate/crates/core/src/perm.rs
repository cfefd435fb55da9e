//! Permutation and pattern primitives.
//!
//! Permutations are stored in one-line notation with 1-based values. The
//! empty permutation is an ordinary value and plays the role of the root
//! prefix class.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Builds a permutation, checking that `entries` is a rearrangement of `1..=len`.
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let k = entries.len();
        let mut seen = vec![false; k];
        for &v in &entries {
            if v == 0 || v > k || seen[v - 1] {
                return Err(Error::InvalidInput(format!(
                    "{entries:?} is not a permutation of 1..={k}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// The 1-based place holding `value`.
    pub fn place_of(&self, value: usize) -> Option<usize> {
        self.0.iter().position(|&v| v == value).map(|p| p + 1)
    }

    pub fn reverse(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Self {
        let k = self.len();
        Permutation(self.0.iter().map(|&v| k + 1 - v).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (place, &v) in self.0.iter().enumerate() {
            inv[v - 1] = place + 1;
        }
        Permutation(inv)
    }

    /// True iff some subsequence of `self` reduces to `pattern`.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        occurs(&self.0, &pattern.0)
    }

    pub fn avoids_all(&self, patterns: &PatternSet) -> bool {
        patterns.iter().all(|q| !self.contains(q))
    }

    /// The `k + 1` refinements of a length-`k` permutation; element `j - 1`
    /// ends in `j`.
    pub fn refinements(&self) -> Vec<Permutation> {
        let k = self.len();
        (1..=k + 1)
            .map(|j| {
                let mut entries: Vec<usize> =
                    self.0.iter().map(|&v| if v >= j { v + 1 } else { v }).collect();
                entries.push(j);
                Permutation(entries)
            })
            .collect()
    }

    /// Removes the entry whose value is `rank` and reduces the rest.
    pub fn delete_rank(&self, rank: usize) -> Result<Permutation> {
        if rank == 0 || rank > self.len() {
            return Err(Error::InvalidInput(format!(
                "rank {rank} out of range for {self}"
            )));
        }
        Ok(Permutation(
            self.0
                .iter()
                .filter(|&&v| v != rank)
                .map(|&v| if v > rank { v - 1 } else { v })
                .collect(),
        ))
    }

    /// Drops the last entry and reduces.
    pub fn parent(&self) -> Option<Permutation> {
        let last = *self.0.last()?;
        self.delete_rank(last).ok()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<usize>) -> Result<Self> {
        Permutation::new(entries)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Digit string up to length 9, bracketed comma form beyond that (and for
/// the empty permutation).
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if (1..=9).contains(&self.len()) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {s:?}")))?;
            let entries = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad entry {t:?} in {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            return Permutation::new(entries).map_err(|e| Error::Parse(e.to_string()));
        }
        if s.is_empty() || s.len() > 9 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!(
                "{s:?} is neither a digit string of length 1..=9 nor a bracketed list"
            )));
        }
        let entries = s.bytes().map(|b| (b - b'0') as usize).collect();
        Permutation::new(entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Reduces a word of distinct entries to the permutation with the same
/// relative order.
pub fn reduce<T: Ord>(word: &[T]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by(|&a, &b| word[a].cmp(&word[b]));
    if order.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(Error::InvalidInput("word has repeated entries".into()));
    }
    let mut entries = vec![0; word.len()];
    for (rank, &pos) in order.iter().enumerate() {
        entries[pos] = rank + 1;
    }
    Ok(Permutation(entries))
}

/// Classical containment on any totally ordered host word.
pub(crate) fn occurs<T: Ord>(host: &[T], pattern: &[usize]) -> bool {
    if pattern.len() > host.len() {
        return false;
    }
    let mut chosen = Vec::with_capacity(pattern.len());
    embed(host, pattern, 0, host.len(), &mut chosen)
}

/// Containment restricted to occurrences that use the last entry of `host`.
pub(crate) fn occurs_at_last<T: Ord>(host: &[T], pattern: &[usize]) -> bool {
    let (m, n) = (pattern.len(), host.len());
    if m == 0 || m > n {
        return m == 0;
    }
    let last = &host[n - 1];
    let top = pattern[m - 1];
    let mut chosen = Vec::with_capacity(m);
    embed_with_last(host, pattern, 0, last, top, &mut chosen)
}

fn embed<T: Ord>(host: &[T], pattern: &[usize], start: usize, end: usize, chosen: &mut Vec<usize>) -> bool {
    let slot = chosen.len();
    if slot == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - slot;
    for pos in start..=end - remaining {
        let v = &host[pos];
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&p, &qx)| (qx < pattern[slot]) == (host[p] < *v));
        if consistent {
            chosen.push(pos);
            if embed(host, pattern, pos + 1, end, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn embed_with_last<T: Ord>(
    host: &[T],
    pattern: &[usize],
    start: usize,
    last: &T,
    top: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let slot = chosen.len();
    if slot + 1 == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - 1 - slot;
    let end = host.len() - 1;
    for pos in start..=end - remaining {
        let v = &host[pos];
        if (pattern[slot] < top) != (v < last) {
            continue;
        }
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&p, &qx)| (qx < pattern[slot]) == (host[p] < *v));
        if consistent {
            chosen.push(pos);
            if embed_with_last(host, pattern, pos + 1, last, top, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// One element of the dihedral group of the square acting on permutation
/// diagrams. The map applies `inverse` first, then `reverse`, then
/// `complement`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symmetry {
    pub inverse: bool,
    pub reverse: bool,
    pub complement: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry::new(false, false, false);

    /// Canonical enumeration order, identity first.
    pub const ALL: [Symmetry; 8] = [
        Symmetry::new(false, false, false),
        Symmetry::new(false, true, false),
        Symmetry::new(false, false, true),
        Symmetry::new(false, true, true),
        Symmetry::new(true, false, false),
        Symmetry::new(true, true, false),
        Symmetry::new(true, false, true),
        Symmetry::new(true, true, true),
    ];

    const fn new(inverse: bool, reverse: bool, complement: bool) -> Self {
        Symmetry {
            inverse,
            reverse,
            complement,
        }
    }

    pub fn apply(&self, p: &Permutation) -> Permutation {
        let mut out = p.clone();
        if self.inverse {
            out = out.inverse();
        }
        if self.reverse {
            out = out.reverse();
        }
        if self.complement {
            out = out.complement();
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Symmetry::IDENTITY
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [
            (self.inverse, "inverse"),
            (self.reverse, "reverse"),
            (self.complement, "complement"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, name)| *name)
        .collect();
        if parts.is_empty() {
            f.write_str("identity")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// A finite set of forbidden patterns, each of length at least one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Permutation>", into = "Vec<Permutation>")]
pub struct PatternSet(BTreeSet<Permutation>);

impl PatternSet {
    pub fn new<I: IntoIterator<Item = Permutation>>(patterns: I) -> Result<Self> {
        let set: BTreeSet<Permutation> = patterns.into_iter().collect();
        if set.iter().any(Permutation::is_empty) {
            return Err(Error::InvalidInput("patterns must be nonempty".into()));
        }
        Ok(PatternSet(set))
    }

    pub fn empty() -> Self {
        PatternSet::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(Permutation::len).max().unwrap_or(0)
    }

    /// True if some pattern occurs in `host`.
    pub fn hits(&self, host: &Permutation) -> bool {
        !host.avoids_all(self)
    }

    pub fn image(&self, g: Symmetry) -> PatternSet {
        PatternSet(self.0.iter().map(|q| g.apply(q)).collect())
    }

    /// All distinct images under the eight symmetries, in canonical order,
    /// each tagged with the first group element producing it.
    pub fn symmetry_closure(&self) -> Vec<(Symmetry, PatternSet)> {
        let mut out: Vec<(Symmetry, PatternSet)> = Vec::new();
        for g in Symmetry::ALL {
            let img = self.image(g);
            if !out.iter().any(|(_, seen)| *seen == img) {
                out.push((g, img));
            }
        }
        out
    }
}

impl TryFrom<Vec<Permutation>> for PatternSet {
    type Error = Error;

    fn try_from(v: Vec<Permutation>) -> Result<Self> {
        PatternSet::new(v)
    }
}

impl From<PatternSet> for Vec<Permutation> {
    fn from(p: PatternSet) -> Self {
        p.0.into_iter().collect()
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Accepts `""`, `"123,132"`, `"[1,2,3],[1,3,2]"` and `"[[1,2,3],[1,3,2]]"`.
impl FromStr for PatternSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "[]" {
            return Ok(PatternSet::empty());
        }
        let body = match s.strip_prefix('[') {
            Some(rest) if rest.trim_start().starts_with('[') => rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {s:?}")))?,
            _ => s,
        };
        let mut tokens = Vec::new();
        let mut depth = 0usize;
        let mut current = String::new();
        for c in body.chars() {
            match c {
                '[' => {
                    depth += 1;
                    current.push(c);
                }
                ']' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {s:?}")))?;
                    current.push(c);
                }
                ',' if depth == 0 => tokens.push(std::mem::take(&mut current)),
                _ => current.push(c),
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
        }
        tokens.push(current);
        let patterns = tokens
            .iter()
            .map(|t| t.parse::<Permutation>())
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(patterns).map_err(|e| Error::Parse(e.to_string()))
    }
}
