//! Symbolic certification of forced gaps and reversely deletable ranks.
//!
//! A prefix class is described by a permutation `sigma` of length `k` and
//! the (unknown) increasing values `i_1 < ... < i_k`. The sentinels are
//! `i_0 = 0` and `i_{k+1} = n + 1`, and gap `j` is the open interval
//! `(i_j, i_{j+1})`. Entries after the prefix are represented by suffix
//! symbols whose only known facts are rank bounds against the prefix values
//! and a strict order among themselves.
//!
//! Both certifiers are sound but incomplete: a `false` answer only means no
//! proof was found.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{PatternSet, Permutation};

/// Forced adjacencies of a prefix class: `j` in the set means
/// `i_{j+1} = i_j + 1` for every member.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GapSet {
    k: usize,
    forced: Vec<usize>,
}

impl GapSet {
    pub fn empty(k: usize) -> Self {
        GapSet {
            k,
            forced: Vec::new(),
        }
    }

    pub fn new<I: IntoIterator<Item = usize>>(k: usize, forced: I) -> Result<Self> {
        let mut gaps = GapSet::empty(k);
        for j in forced {
            if j > k {
                return Err(Error::InvalidInput(format!("gap {j} out of range 0..={k}")));
            }
            gaps.insert(j);
        }
        Ok(gaps)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contains(&self, j: usize) -> bool {
        self.forced.binary_search(&j).is_ok()
    }

    pub fn insert(&mut self, j: usize) {
        assert!(j <= self.k, "gap {j} out of range 0..={}", self.k);
        if let Err(at) = self.forced.binary_search(&j) {
            self.forced.insert(at, j);
        }
    }

    pub fn remove(&mut self, j: usize) {
        if let Ok(at) = self.forced.binary_search(&j) {
            self.forced.remove(at);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.forced.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.forced.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.forced.is_empty()
    }

    /// Does the increasing tuple `values` (within `1..=n`) close every
    /// forced gap?
    pub fn obeyed_by(&self, values: &[usize], n: usize) -> bool {
        debug_assert_eq!(values.len(), self.k);
        self.forced.iter().all(|&j| {
            let lo = if j == 0 { 0 } else { values[j - 1] };
            let hi = if j == self.k { n + 1 } else { values[j] };
            hi == lo + 1
        })
    }

    /// Every gap index of `0..=k` the tuple leaves open.
    pub fn open_gaps(values: &[usize], n: usize) -> impl Iterator<Item = usize> + '_ {
        let k = values.len();
        (0..=k).filter(move |&j| {
            let lo = if j == 0 { 0 } else { values[j - 1] };
            let hi = if j == k { n + 1 } else { values[j] };
            hi > lo + 1
        })
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forced.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Where a pattern slot lands: a place of the prefix (1-based) or a suffix
/// symbol (1-based, position-ordered).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Descriptor {
    PrefixPlace(usize),
    SuffixSymbol(usize),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::PrefixPlace(t) => write!(f, "p{t}"),
            Descriptor::SuffixSymbol(u) => write!(f, "u{u}"),
        }
    }
}

/// A hypothetical occurrence of `pattern`: slot `x` of the pattern is
/// realised by `embedding[x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Event {
    pub pattern: Permutation,
    pub embedding: Vec<Descriptor>,
}

impl Event {
    pub fn symbol_count(&self) -> usize {
        self.embedding
            .iter()
            .filter_map(|d| match d {
                Descriptor::SuffixSymbol(u) => Some(*u),
                Descriptor::PrefixPlace(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn uses_place(&self, place: usize) -> bool {
        self.embedding.contains(&Descriptor::PrefixPlace(place))
    }

    fn check_shape(&self, k: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidInput(format!("malformed event {self}: {why}")));
        if self.embedding.len() != self.pattern.len() {
            return bad("embedding length differs from pattern length");
        }
        for w in self.embedding.windows(2) {
            if w[0] >= w[1] {
                return bad("descriptors are not position-increasing");
            }
        }
        for d in &self.embedding {
            match *d {
                Descriptor::PrefixPlace(t) if t == 0 || t > k => return bad("place out of range"),
                Descriptor::SuffixSymbol(0) => return bad("symbols are 1-based"),
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.embedding.iter().map(ToString::to_string).collect();
        write!(f, "{} as ({})", self.pattern, parts.join(" "))
    }
}

/// What is known about the suffix symbols of an event.
///
/// Symbol `u` satisfies `i_{lower(u)} < u < i_{upper(u)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderFacts {
    lower: Vec<usize>,
    upper: Vec<usize>,
    less: Vec<Vec<bool>>,
}

impl OrderFacts {
    fn unconstrained(k: usize, symbols: usize) -> Self {
        OrderFacts {
            lower: vec![0; symbols],
            upper: vec![k + 1; symbols],
            less: vec![vec![false; symbols]; symbols],
        }
    }

    pub fn symbol_count(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self, u: usize) -> usize {
        self.lower[u - 1]
    }

    pub fn upper(&self, u: usize) -> usize {
        self.upper[u - 1]
    }

    /// Is `u < v` known?
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.less[u - 1][v - 1]
    }

    /// Is the value at `a` known to be below the value at `b`?
    pub fn implies_less(&self, sigma: &Permutation, a: Descriptor, b: Descriptor) -> bool {
        use Descriptor::*;
        let rank = |t: usize| sigma.entries()[t - 1];
        match (a, b) {
            (PrefixPlace(x), PrefixPlace(y)) => rank(x) < rank(y),
            (PrefixPlace(x), SuffixSymbol(u)) => rank(x) <= self.lower(u),
            (SuffixSymbol(u), PrefixPlace(x)) => rank(x) >= self.upper(u),
            (SuffixSymbol(u), SuffixSymbol(v)) => self.less(u, v),
        }
    }

    /// Closes `less` transitively, adds relations mediated by a prefix
    /// value and pushes bounds along `less`. Returns false on a cycle.
    fn saturate(&mut self) -> bool {
        let s = self.symbol_count();
        loop {
            let mut changed = false;
            for u in 0..s {
                for v in 0..s {
                    if u != v && !self.less[u][v] && self.upper[u] <= self.lower[v] {
                        self.less[u][v] = true;
                        changed = true;
                    }
                }
            }
            for w in 0..s {
                for u in 0..s {
                    if !self.less[u][w] {
                        continue;
                    }
                    for v in 0..s {
                        if self.less[w][v] && !self.less[u][v] {
                            self.less[u][v] = true;
                            changed = true;
                        }
                    }
                }
            }
            if (0..s).any(|u| self.less[u][u]) {
                return false;
            }
            for u in 0..s {
                for v in 0..s {
                    if self.less[u][v] {
                        if self.lower[v] < self.lower[u] {
                            self.lower[v] = self.lower[u];
                            changed = true;
                        }
                        if self.upper[u] > self.upper[v] {
                            self.upper[u] = self.upper[v];
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Some open gap lies between the bounds of every symbol.
    fn admissible(&self, gaps: &GapSet) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .all(|(&lo, &hi)| (lo..hi).any(|j| !gaps.contains(j)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventFacts {
    /// No J-obeying tuple and suffix values can realise the event.
    Vacuous,
    Constrained(OrderFacts),
}

/// Derives the order facts an event imposes on its suffix symbols.
pub fn order_facts(sigma: &Permutation, gaps: &GapSet, ev: &Event) -> Result<EventFacts> {
    let k = sigma.len();
    ev.check_shape(k)?;
    if gaps.k() != k {
        return Err(Error::InvalidInput(format!(
            "gap set of length {} for prefix {sigma}",
            gaps.k()
        )));
    }
    let q = ev.pattern.entries();
    let ranks = sigma.entries();
    let mut facts = OrderFacts::unconstrained(k, ev.symbol_count());

    for (x, &dx) in ev.embedding.iter().enumerate() {
        for (y, &dy) in ev.embedding.iter().enumerate().skip(x + 1) {
            match (dx, dy) {
                (Descriptor::PrefixPlace(a), Descriptor::PrefixPlace(b)) => {
                    if (q[x] < q[y]) != (ranks[a - 1] < ranks[b - 1]) {
                        return Ok(EventFacts::Vacuous);
                    }
                }
                (Descriptor::PrefixPlace(a), Descriptor::SuffixSymbol(u)) => {
                    let r = ranks[a - 1];
                    if q[x] < q[y] {
                        facts.lower[u - 1] = facts.lower[u - 1].max(r);
                    } else {
                        facts.upper[u - 1] = facts.upper[u - 1].min(r);
                    }
                }
                (Descriptor::SuffixSymbol(u), Descriptor::SuffixSymbol(v)) => {
                    if q[x] < q[y] {
                        facts.less[u - 1][v - 1] = true;
                    } else {
                        facts.less[v - 1][u - 1] = true;
                    }
                }
                (Descriptor::SuffixSymbol(_), Descriptor::PrefixPlace(_)) => {
                    unreachable!("shape check orders prefix places first")
                }
            }
        }
    }

    if !facts.saturate() || !facts.admissible(gaps) {
        return Ok(EventFacts::Vacuous);
    }
    Ok(EventFacts::Constrained(facts))
}

/// Looks for an occurrence of some pattern whose value relations are all
/// implied by `facts`, using the prefix places in `places` (sorted) and
/// any of the suffix symbols.
fn find_witness(
    sigma: &Permutation,
    facts: &OrderFacts,
    places: &[usize],
    patterns: &PatternSet,
) -> Option<Event> {
    let descriptors: Vec<Descriptor> = places
        .iter()
        .map(|&t| Descriptor::PrefixPlace(t))
        .chain((1..=facts.symbol_count()).map(Descriptor::SuffixSymbol))
        .collect();
    let mut chosen = Vec::new();
    for q in patterns.iter() {
        chosen.clear();
        if implied_embedding(sigma, facts, &descriptors, q.entries(), 0, &mut chosen) {
            return Some(Event {
                pattern: q.clone(),
                embedding: chosen,
            });
        }
    }
    None
}

fn implied_embedding(
    sigma: &Permutation,
    facts: &OrderFacts,
    descriptors: &[Descriptor],
    q: &[usize],
    start: usize,
    chosen: &mut Vec<Descriptor>,
) -> bool {
    let slot = chosen.len();
    if slot == q.len() {
        return true;
    }
    let remaining = q.len() - slot;
    if descriptors.len() < remaining {
        return false;
    }
    for at in start..=descriptors.len() - remaining {
        let d = descriptors[at];
        let consistent = chosen.iter().zip(q).all(|(&c, &qx)| {
            if qx < q[slot] {
                facts.implies_less(sigma, c, d)
            } else {
                facts.implies_less(sigma, d, c)
            }
        });
        if consistent {
            chosen.push(d);
            if implied_embedding(sigma, facts, descriptors, q, at + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Searches for an occurrence implied by the event that avoids
/// `excluded_place`. Vacuous events have nothing to bail out.
pub fn find_bailout(
    sigma: &Permutation,
    gaps: &GapSet,
    ev: &Event,
    excluded_place: usize,
    patterns: &PatternSet,
) -> Result<Option<Event>> {
    let facts = match order_facts(sigma, gaps, ev)? {
        EventFacts::Vacuous => return Ok(None),
        EventFacts::Constrained(f) => f,
    };
    Ok(bailout_with_facts(sigma, &facts, excluded_place, patterns))
}

fn bailout_with_facts(
    sigma: &Permutation,
    facts: &OrderFacts,
    excluded_place: usize,
    patterns: &PatternSet,
) -> Option<Event> {
    let places: Vec<usize> = (1..=sigma.len()).filter(|&t| t != excluded_place).collect();
    find_witness(sigma, facts, &places, patterns)
}

/// An occurrence forced by one value sitting in open gap `j`, if any.
pub fn gap_witness(sigma: &Permutation, patterns: &PatternSet, j: usize) -> Option<Event> {
    let k = sigma.len();
    assert!(j <= k, "gap {j} out of range for {sigma}");
    let facts = OrderFacts {
        lower: vec![j],
        upper: vec![j + 1],
        less: vec![vec![false]],
    };
    let places: Vec<usize> = (1..=k).collect();
    find_witness(sigma, &facts, &places, patterns)
}

/// Certifies that gap `j` is forced: a single value inside it would
/// complete a forbidden pattern with the prefix.
pub fn certify_gap(sigma: &Permutation, patterns: &PatternSet, j: usize, _so_far: &GapSet) -> bool {
    gap_witness(sigma, patterns, j).is_some()
}

/// Iterates [`certify_gap`] to a fixed point.
pub fn compute_gap_set(sigma: &Permutation, patterns: &PatternSet) -> GapSet {
    let k = sigma.len();
    let mut gaps = GapSet::empty(k);
    loop {
        let mut changed = false;
        for j in 0..=k {
            if !gaps.contains(j) && certify_gap(sigma, patterns, j, &gaps) {
                gaps.insert(j);
                changed = true;
            }
        }
        if !changed {
            return gaps;
        }
    }
}

/// Every event in which the entry at `place` takes part, with suffix
/// symbols `u_1..u_s` used consecutively.
pub fn events_through_place(sigma: &Permutation, patterns: &PatternSet, place: usize) -> Vec<Event> {
    let k = sigma.len();
    let mut out = Vec::new();
    for q in patterns.iter() {
        let m = q.len();
        for p in 1..=m.min(k) {
            for_each_subset(k, p, &mut |places: &[usize]| {
                if !places.contains(&place) {
                    return;
                }
                let embedding = places
                    .iter()
                    .map(|&t| Descriptor::PrefixPlace(t))
                    .chain((1..=m - p).map(Descriptor::SuffixSymbol))
                    .collect();
                out.push(Event {
                    pattern: q.clone(),
                    embedding,
                });
            });
        }
    }
    out
}

/// Calls `f` with each increasing `p`-subset of `1..=k`.
fn for_each_subset(k: usize, p: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(next: usize, k: usize, p: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == p {
            f(acc);
            return;
        }
        for t in next..=k {
            if k - t + 1 < p - acc.len() {
                break;
            }
            acc.push(t);
            go(t + 1, k, p, acc, f);
            acc.pop();
        }
    }
    go(1, k, p, &mut Vec::with_capacity(p), f);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Vacuous,
    BailedOut { witness: Event },
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub event: Event,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAttempt {
    pub rank: usize,
    pub place: usize,
    pub certified: bool,
    pub events: Vec<EventRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapProof {
    pub gap: usize,
    pub witness: Event,
}

/// Transcript of the reasoning about one prefix class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassProof {
    pub sigma: Permutation,
    pub gaps: Vec<usize>,
    pub gap_proofs: Vec<GapProof>,
    pub rank_attempts: Vec<RankAttempt>,
    pub deletable_rank: Option<usize>,
}

fn check_rank(
    sigma: &Permutation,
    patterns: &PatternSet,
    gaps: &GapSet,
    rank: usize,
    mut log: Option<&mut Vec<EventRecord>>,
) -> Result<bool> {
    let place = sigma
        .place_of(rank)
        .ok_or_else(|| Error::InvalidInput(format!("rank {rank} out of range for {sigma}")))?;
    let mut certified = true;
    for ev in events_through_place(sigma, patterns, place) {
        let verdict = match order_facts(sigma, gaps, &ev)? {
            EventFacts::Vacuous => Verdict::Vacuous,
            EventFacts::Constrained(facts) => match bailout_with_facts(sigma, &facts, place, patterns) {
                Some(witness) => Verdict::BailedOut { witness },
                None => Verdict::Uncovered,
            },
        };
        if verdict == Verdict::Uncovered {
            certified = false;
        }
        match log.as_deref_mut() {
            Some(log) => log.push(EventRecord { event: ev, verdict }),
            None if !certified => return Ok(false),
            None => {}
        }
    }
    Ok(certified)
}

/// Certifies that re-inserting the value of rank `rank` is always safe for
/// tuples obeying `gaps`.
pub fn certify_deletable(
    sigma: &Permutation,
    patterns: &PatternSet,
    gaps: &GapSet,
    rank: usize,
) -> Result<bool> {
    check_rank(sigma, patterns, gaps, rank, None)
}

/// The smallest certified rank.
pub fn find_deletable_rank(sigma: &Permutation, patterns: &PatternSet, gaps: &GapSet) -> Option<usize> {
    (1..=sigma.len()).find(|&r| check_rank(sigma, patterns, gaps, r, None).unwrap_or(false))
}

/// Full transcript for `sigma`: gap witnesses, then every rank attempt up
/// to and including the first certified one.
pub fn explain_class(sigma: &Permutation, patterns: &PatternSet) -> ClassProof {
    let gaps = compute_gap_set(sigma, patterns);
    let gap_proofs = gaps
        .iter()
        .filter_map(|j| gap_witness(sigma, patterns, j).map(|witness| GapProof { gap: j, witness }))
        .collect();
    let mut rank_attempts = Vec::new();
    let mut deletable_rank = None;
    for rank in 1..=sigma.len() {
        let mut events = Vec::new();
        let certified =
            check_rank(sigma, patterns, &gaps, rank, Some(&mut events)).expect("rank is in range");
        rank_attempts.push(RankAttempt {
            rank,
            place: sigma.place_of(rank).expect("rank is in range"),
            certified,
            events,
        });
        if certified {
            deletable_rank = Some(rank);
            break;
        }
    }
    ClassProof {
        sigma: sigma.clone(),
        gaps: gaps.to_vec(),
        gap_proofs,
        rank_attempts,
        deletable_rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Descriptor::{PrefixPlace as P, SuffixSymbol as S};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn gaps(k: usize, v: &[usize]) -> GapSet {
        GapSet::new(k, v.iter().copied()).unwrap()
    }

    fn ev(q: &str, emb: &[Descriptor]) -> Event {
        Event {
            pattern: p(q),
            embedding: emb.to_vec(),
        }
    }

    #[test]
    fn gap_set_obedience_uses_sentinels() {
        let j = gaps(2, &[2]);
        assert!(j.obeyed_by(&[1, 5], 5));
        assert!(!j.obeyed_by(&[1, 4], 5));
        let zero = gaps(1, &[0]);
        assert!(zero.obeyed_by(&[1], 3));
        assert!(!zero.obeyed_by(&[2], 3));
        assert_eq!(GapSet::open_gaps(&[2, 3], 5).collect::<Vec<_>>(), vec![0, 2]);
        assert!(GapSet::new(1, [2]).is_err());
    }

    #[test]
    fn event_one_of_2413_is_not_vacuous() {
        let e = ev("1234", &[P(1), S(1), S(2), S(3)]);
        match order_facts(&p("2413"), &gaps(4, &[4]), &e).unwrap() {
            EventFacts::Constrained(f) => {
                for u in 1..=3 {
                    assert!(f.lower(u) >= 2);
                }
                assert!(f.less(1, 3));
            }
            EventFacts::Vacuous => panic!("event 1 should be possible"),
        }
    }

    #[test]
    fn closed_gap_makes_event_vacuous() {
        let e = ev("132", &[P(1), P(2), S(1)]);
        assert_eq!(
            order_facts(&p("12"), &gaps(2, &[1]), &e).unwrap(),
            EventFacts::Vacuous
        );
    }

    #[test]
    fn inconsistent_prefix_values_are_vacuous() {
        let e = ev("132", &[P(1), P(2), S(1)]);
        assert_eq!(
            order_facts(&p("21"), &gaps(2, &[]), &e).unwrap(),
            EventFacts::Vacuous
        );
    }

    #[test]
    fn malformed_events_are_rejected() {
        let e = ev("12", &[S(1), P(1)]);
        assert!(order_facts(&p("1"), &gaps(1, &[]), &e).is_err());
        let e = ev("12", &[P(1)]);
        assert!(order_facts(&p("1"), &gaps(1, &[]), &e).is_err());
        let e = ev("12", &[P(1), P(3)]);
        assert!(order_facts(&p("12"), &gaps(2, &[]), &e).is_err());
    }

    #[test]
    fn prefix_mediated_order_closes_cycles() {
        // u1 below i_1 and u2 above i_1, but the pattern wants u2 < u1.
        let e = ev("231", &[P(1), S(1), S(2)]);
        let f = order_facts(&p("1"), &gaps(1, &[]), &e).unwrap();
        assert!(matches!(f, EventFacts::Constrained(_)));
        let e = ev("213", &[P(1), S(1), S(2)]);
        match order_facts(&p("1"), &gaps(1, &[]), &e).unwrap() {
            EventFacts::Constrained(f) => {
                assert_eq!((f.lower(1), f.upper(1)), (0, 1));
                assert_eq!((f.lower(2), f.upper(2)), (1, 2));
                assert!(f.less(1, 2));
            }
            EventFacts::Vacuous => panic!(),
        }
    }

    #[test]
    fn bailouts() {
        let pats = set("1234,1324,1243");
        let e = ev("1234", &[P(1), S(1), S(2), S(3)]);
        let w = find_bailout(&p("2413"), &gaps(4, &[4]), &e, 1, &pats)
            .unwrap()
            .unwrap();
        assert!(!w.uses_place(1));
        assert!(w.uses_place(3));

        let e = ev("123", &[P(1), S(1), S(2)]);
        let w = find_bailout(&p("21"), &gaps(2, &[]), &e, 1, &set("123"))
            .unwrap()
            .unwrap();
        assert_eq!(w, ev("123", &[P(2), S(1), S(2)]));

        assert_eq!(
            find_bailout(&p("1"), &gaps(1, &[]), &e, 1, &set("123")).unwrap(),
            None
        );
    }

    #[test]
    fn gap_certification() {
        let none = GapSet::empty(2);
        assert!(certify_gap(&p("12"), &set("123"), 2, &none));
        assert!(!certify_gap(&p("12"), &set("123"), 1, &none));
        assert!(certify_gap(
            &p("2413"),
            &set("1234,1324,1243"),
            4,
            &GapSet::empty(4)
        ));
        assert_eq!(compute_gap_set(&p("12"), &set("123")), gaps(2, &[2]));
        assert_eq!(compute_gap_set(&p("12"), &set("132")), gaps(2, &[1]));
        assert_eq!(compute_gap_set(&p("1"), &PatternSet::empty()), gaps(1, &[]));
        assert_eq!(compute_gap_set(&p("2413"), &set("1234,1324,1243")), gaps(4, &[4]));
        assert_eq!(compute_gap_set(&p("1"), &set("12")), gaps(1, &[1]));
        assert_eq!(compute_gap_set(&Permutation::empty(), &set("1")), gaps(0, &[0]));
    }

    #[test]
    fn deletability() {
        let pats = set("1234,1324,1243");
        assert!(certify_deletable(&p("2413"), &pats, &gaps(4, &[4]), 2).unwrap());
        assert!(certify_deletable(&p("21"), &set("123"), &gaps(2, &[]), 2).unwrap());
        assert!(!certify_deletable(&p("1"), &set("123"), &gaps(1, &[]), 1).unwrap());
        assert!(certify_deletable(&p("1"), &set("123"), &gaps(1, &[]), 2).is_err());

        assert_eq!(
            find_deletable_rank(&p("12"), &set("123"), &gaps(2, &[2])),
            Some(2)
        );
        assert_eq!(find_deletable_rank(&p("21"), &set("132"), &gaps(2, &[])), Some(2));
        assert_eq!(find_deletable_rank(&p("1"), &set("123"), &gaps(1, &[])), None);
        assert_eq!(
            find_deletable_rank(&p("1"), &PatternSet::empty(), &gaps(1, &[])),
            Some(1)
        );
    }

    #[test]
    fn six_events_of_2413() {
        let pats = set("1234,1324,1243");
        let proof = explain_class(&p("2413"), &pats);
        assert_eq!(proof.gaps, vec![4]);
        assert_eq!(proof.deletable_rank, Some(2));
        let attempt = proof.rank_attempts.last().unwrap();
        assert_eq!((attempt.rank, attempt.place), (2, 1));
        let live: Vec<&EventRecord> = attempt
            .events
            .iter()
            .filter(|r| r.verdict != Verdict::Vacuous)
            .collect();
        // i_2 with three suffix entries, or i_2 i_3 with two, for each pattern.
        assert_eq!(live.len(), 6);
        for r in live {
            match &r.verdict {
                Verdict::BailedOut { witness } => assert!(witness.uses_place(3)),
                other => panic!("unexpected verdict {other:?}"),
            }
        }
    }

    #[test]
    fn events_cover_every_prefix_subset_through_the_place() {
        let evs = events_through_place(&p("21"), &set("123"), 1);
        let shapes: Vec<Vec<Descriptor>> = evs.iter().map(|e| e.embedding.clone()).collect();
        assert_eq!(shapes, vec![vec![P(1), S(1), S(2)], vec![P(1), P(2), S(1)]]);
    }
}
