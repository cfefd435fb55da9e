//! Brute-force ground truth for small `n`: pruned enumeration of avoiders,
//! prefix classes, and empirical versions of the gap and deletability
//! certifiers.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::parallel::{map_range, Execution};
use crate::perm::{occurs_at_last, reduce, PatternSet, Permutation};
use crate::reasoner::GapSet;
use crate::scheme::{self, Certifier, SchemeMode, SearchResult};
use crate::BigCount;

/// Default largest length checked by the empirical certifiers.
pub const DEFAULT_HORIZON: usize = 8;

/// Increasing prefix values `i_1 < ... < i_k` inside `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueTuple {
    n: usize,
    values: Vec<usize>,
}

impl ValueTuple {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        let in_range = values.first().is_none_or(|&v| v >= 1) && values.last().is_none_or(|&v| v <= n);
        if !increasing || !in_range {
            return Err(Error::InvalidInput(format!(
                "{values:?} is not an increasing tuple inside 1..={n}"
            )));
        }
        Ok(ValueTuple { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Prefix word `i_{sigma_1} ... i_{sigma_k}`.
    pub fn arrange(&self, sigma: &Permutation) -> Vec<usize> {
        sigma.entries().iter().map(|&s| self.values[s - 1]).collect()
    }
}

/// Calls `f` with every increasing `k`-tuple of `1..=n`, in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(next: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        let need = k - acc.len();
        for v in next..=n {
            if n - v + 1 < need {
                break;
            }
            acc.push(v);
            go(v + 1, n, k, acc, f);
            acc.pop();
        }
    }
    if k <= n {
        go(1, n, k, &mut Vec::with_capacity(k), f);
    }
}

/// Depth-first extension of a prefix, abandoning any prefix that already
/// contains a forbidden pattern.
struct Extender<'a> {
    n: usize,
    patterns: Vec<&'a [usize]>,
}

impl<'a> Extender<'a> {
    fn new(n: usize, patterns: &'a PatternSet) -> Self {
        Extender {
            n,
            patterns: patterns.iter().map(Permutation::entries).collect(),
        }
    }

    fn last_entry_completes_pattern(&self, word: &[u8]) -> bool {
        self.patterns.iter().any(|q| occurs_at_last(word, q))
    }

    fn count(&self, word: &mut Vec<u8>, used: &mut [bool]) -> u64 {
        if word.len() == self.n {
            return 1;
        }
        let mut total = 0;
        for v in 1..=self.n {
            if used[v - 1] {
                continue;
            }
            word.push(v as u8);
            if !self.last_entry_completes_pattern(word) {
                used[v - 1] = true;
                total += self.count(word, used);
                used[v - 1] = false;
            }
            word.pop();
        }
        total
    }

    fn collect(&self, word: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if word.len() == self.n {
            out.push(Permutation::from_vec_unchecked(
                word.iter().map(|&v| v as usize).collect(),
            ));
            return;
        }
        for v in 1..=self.n {
            if used[v - 1] {
                continue;
            }
            word.push(v as u8);
            if !self.last_entry_completes_pattern(word) {
                used[v - 1] = true;
                self.collect(word, used, out);
                used[v - 1] = false;
            }
            word.pop();
        }
    }

    /// Counts completions and records the count of every prefix of length
    /// at most `max_prefix`.
    fn census(
        &self,
        word: &mut Vec<u8>,
        used: &mut [bool],
        max_prefix: usize,
        out: &mut HashMap<Vec<u8>, u64>,
    ) -> u64 {
        let total = if word.len() == self.n {
            1
        } else {
            let mut total = 0;
            for v in 1..=self.n {
                if used[v - 1] {
                    continue;
                }
                word.push(v as u8);
                if !self.last_entry_completes_pattern(word) {
                    used[v - 1] = true;
                    total += self.census(word, used, max_prefix, out);
                    used[v - 1] = false;
                }
                word.pop();
            }
            total
        };
        if word.len() <= max_prefix && total > 0 {
            out.insert(word.clone(), total);
        }
        total
    }

    /// Starts from a fixed prefix; `None` if the prefix is not a valid
    /// start or already contains a pattern.
    fn seed(&self, prefix: &[usize]) -> Option<(Vec<u8>, Vec<bool>)> {
        let mut used = vec![false; self.n];
        let mut word = Vec::with_capacity(self.n);
        for &v in prefix {
            if v == 0 || v > self.n || used[v - 1] {
                return None;
            }
            used[v - 1] = true;
            word.push(v as u8);
            if self.last_entry_completes_pattern(&word) {
                return None;
            }
        }
        Some((word, used))
    }
}

/// Longest permutation the oracle handles; entries are stored as bytes.
pub const MAX_LENGTH: usize = u8::MAX as usize - 1;

fn check_length(n: usize) {
    assert!(n <= MAX_LENGTH, "oracle lengths are limited to {MAX_LENGTH}");
}

/// All avoiders of length `n`, in lexicographic order.
pub fn enumerate_avoiders(n: usize, patterns: &PatternSet) -> Vec<Permutation> {
    enumerate_avoiders_with(n, patterns, Execution::default())
}

pub fn enumerate_avoiders_with(n: usize, patterns: &PatternSet, exec: Execution) -> Vec<Permutation> {
    check_length(n);
    let ext = Extender::new(n, patterns);
    if n == 0 {
        return vec![Permutation::empty()];
    }
    map_range(exec, n, |first| {
        let mut out = Vec::new();
        if let Some((mut word, mut used)) = ext.seed(&[first + 1]) {
            ext.collect(&mut word, &mut used, &mut out);
        }
        out
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `|A(n; P)|` without materialising the avoiders.
pub fn count_avoiders(n: usize, patterns: &PatternSet) -> BigCount {
    count_avoiders_with(n, patterns, Execution::default())
}

pub fn count_avoiders_with(n: usize, patterns: &PatternSet, exec: Execution) -> BigCount {
    check_length(n);
    if n == 0 {
        return BigUint::from(1u32);
    }
    let ext = Extender::new(n, patterns);
    let per_first = map_range(exec, n, |first| match ext.seed(&[first + 1]) {
        Some((mut word, mut used)) => ext.count(&mut word, &mut used),
        None => 0,
    });
    per_first.into_iter().map(BigUint::from).sum()
}

/// Members of the prefix class `A_sigma(n; P; values)`, sorted.
pub fn prefix_class_members(
    n: usize,
    patterns: &PatternSet,
    sigma: &Permutation,
    tuple: &ValueTuple,
) -> Result<Vec<Permutation>> {
    check_length(n);
    if tuple.len() != sigma.len() || tuple.n() != n {
        return Err(Error::InvalidInput(format!(
            "tuple {:?} does not fit prefix {sigma} at length {n}",
            tuple.values()
        )));
    }
    let ext = Extender::new(n, patterns);
    let mut out = Vec::new();
    if let Some((mut word, mut used)) = ext.seed(&tuple.arrange(sigma)) {
        ext.collect(&mut word, &mut used, &mut out);
    }
    Ok(out)
}

/// Counts of every avoider prefix up to a fixed length, for all lengths up
/// to the horizon. Backs the empirical certifiers.
pub struct PrefixCensus {
    patterns: PatternSet,
    horizon: usize,
    max_prefix: usize,
    layers: Vec<HashMap<Vec<u8>, u64>>,
}

impl PrefixCensus {
    pub fn new(patterns: &PatternSet, horizon: usize, max_prefix: usize) -> Self {
        Self::new_with(patterns, horizon, max_prefix, Execution::default())
    }

    pub fn new_with(patterns: &PatternSet, horizon: usize, max_prefix: usize, exec: Execution) -> Self {
        check_length(horizon);
        let layers = map_range(exec, horizon + 1, |n| {
            let ext = Extender::new(n, patterns);
            let mut map = HashMap::new();
            ext.census(
                &mut Vec::with_capacity(n),
                &mut vec![false; n],
                max_prefix,
                &mut map,
            );
            map
        });
        PrefixCensus {
            patterns: patterns.clone(),
            horizon,
            max_prefix,
            layers,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    /// `|A_sigma(n; P; values)|`.
    pub fn class_size(&self, n: usize, sigma: &Permutation, values: &[usize]) -> u64 {
        assert!(n <= self.horizon && sigma.len() <= self.max_prefix);
        let word: Vec<u8> = sigma.entries().iter().map(|&s| values[s - 1] as u8).collect();
        self.layers[n].get(&word).copied().unwrap_or(0)
    }

    /// Gaps left open by no nonempty class of shape `sigma` up to the horizon.
    pub fn gap_set(&self, sigma: &Permutation) -> GapSet {
        let k = sigma.len();
        assert!(k <= self.max_prefix);
        let mut gaps = GapSet::new(k, 0..=k).expect("in range");
        for (n, layer) in self.layers.iter().enumerate() {
            for word in layer.keys().filter(|w| w.len() == k) {
                if reduce(word).expect("prefix entries are distinct") != *sigma {
                    continue;
                }
                let mut values: Vec<usize> = word.iter().map(|&v| v as usize).collect();
                values.sort_unstable();
                for j in GapSet::open_gaps(&values, n) {
                    gaps.remove(j);
                }
            }
        }
        gaps
    }

    /// Does deleting rank `rank` preserve class sizes for every tuple
    /// obeying `gaps`, for all lengths up to the horizon?
    pub fn deletable(&self, sigma: &Permutation, gaps: &GapSet, rank: usize) -> Result<bool> {
        let k = sigma.len();
        let target = sigma.delete_rank(rank)?;
        for n in k.max(1)..=self.horizon {
            let mut holds = true;
            for_each_tuple(n, k, &mut |values| {
                if !holds || !gaps.obeyed_by(values, n) {
                    return;
                }
                let reduced: Vec<usize> = values
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j + 1 != rank)
                    .map(|(j, &v)| if j + 1 > rank { v - 1 } else { v })
                    .collect();
                if self.class_size(n, sigma, values) != self.class_size(n - 1, &target, &reduced) {
                    holds = false;
                }
            });
            if !holds {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Gaps that are closed in every nonempty class of shape `sigma` for all
/// lengths up to `horizon`.
pub fn empirical_gap_set(sigma: &Permutation, patterns: &PatternSet, horizon: usize) -> GapSet {
    PrefixCensus::new(patterns, horizon, sigma.len()).gap_set(sigma)
}

pub fn empirical_deletable(
    sigma: &Permutation,
    patterns: &PatternSet,
    gaps: &GapSet,
    rank: usize,
    horizon: usize,
) -> Result<bool> {
    PrefixCensus::new(patterns, horizon, sigma.len()).deletable(sigma, gaps, rank)
}

/// Certifies by checking small cases only.
pub struct EmpiricalCertifier {
    census: PrefixCensus,
}

impl EmpiricalCertifier {
    pub fn new(patterns: &PatternSet, max_depth: usize, horizon: usize) -> Self {
        EmpiricalCertifier {
            census: PrefixCensus::new(patterns, horizon, max_depth.min(horizon)),
        }
    }
}

impl Certifier for EmpiricalCertifier {
    fn mode(&self) -> SchemeMode {
        SchemeMode::Empirical
    }

    fn patterns(&self) -> &PatternSet {
        self.census.patterns()
    }

    fn gap_set(&self, sigma: &Permutation) -> GapSet {
        self.census.gap_set(sigma)
    }

    fn deletable_rank(&self, sigma: &Permutation, gaps: &GapSet) -> Option<usize> {
        (1..=sigma.len()).find(|&r| self.census.deletable(sigma, gaps, r).unwrap_or(false))
    }
}

/// Scheme search with the empirical certifiers; the result is marked
/// empirical.
pub fn empirical_scheme_search(
    patterns: &PatternSet,
    max_depth: usize,
    horizon: usize,
) -> Result<SearchResult> {
    if max_depth > horizon {
        return Err(Error::InvalidInput(format!(
            "max depth {max_depth} exceeds the empirical horizon {horizon}"
        )));
    }
    let certifier = EmpiricalCertifier::new(patterns, max_depth, horizon);
    scheme::search_with(&certifier, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        enumerate_avoiders(n, &PatternSet::empty())
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_avoiders(3, &set("123,132")).len(), 4);
        assert_eq!(enumerate_avoiders(5, &PatternSet::empty()).len(), 120);
        assert_eq!(enumerate_avoiders(4, &set("12")), vec![p("4321")]);
        assert_eq!(enumerate_avoiders(0, &set("1")), vec![Permutation::empty()]);
        assert!(enumerate_avoiders(3, &set("1")).is_empty());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = all_perms(4);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn pruned_enumeration_matches_filtering() {
        let sets = ["123", "132,213", "1234,2143", "321,2413,3142", "12"];
        for s in sets {
            let pats = set(s);
            for n in 0..=6 {
                let filtered: Vec<_> = all_perms(n).into_iter().filter(|q| q.avoids_all(&pats)).collect();
                assert_eq!(enumerate_avoiders(n, &pats), filtered, "{s} at n={n}");
            }
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_avoiders(7, &set("123")), BigUint::from(429u32));
        assert_eq!(count_avoiders(0, &set("123")), BigUint::from(1u32));
        assert_eq!(count_avoiders(5, &set("123,132")), BigUint::from(16u32));
        for n in 0..=6 {
            assert_eq!(
                count_avoiders_with(n, &set("1342"), Execution::Sequential),
                BigUint::from(enumerate_avoiders(n, &set("1342")).len())
            );
        }
    }

    #[test]
    fn prefix_class_examples() {
        let members = prefix_class_members(
            5,
            &set("1234,1432"),
            &p("132"),
            &ValueTuple::new(5, vec![2, 3, 5]).unwrap(),
        )
        .unwrap();
        assert_eq!(members, vec![p("25314"), p("25341")]);
        let root = prefix_class_members(
            4,
            &set("123"),
            &Permutation::empty(),
            &ValueTuple::new(4, vec![]).unwrap(),
        )
        .unwrap();
        assert_eq!(root, enumerate_avoiders(4, &set("123")));
        let none =
            prefix_class_members(3, &set("123"), &p("12"), &ValueTuple::new(3, vec![1, 2]).unwrap()).unwrap();
        assert!(none.is_empty());
        assert!(
            prefix_class_members(3, &set("123"), &p("12"), &ValueTuple::new(3, vec![1]).unwrap()).is_err()
        );
        assert!(ValueTuple::new(3, vec![2, 2]).is_err());
        assert!(ValueTuple::new(3, vec![4]).is_err());
    }

    #[test]
    fn empirical_gap_examples() {
        assert_eq!(empirical_gap_set(&p("12"), &set("123"), 8).to_vec(), vec![2]);
        assert_eq!(
            empirical_gap_set(&p("2413"), &set("1234,1324,1243"), 8).to_vec(),
            vec![4]
        );
        assert!(empirical_gap_set(&p("1"), &PatternSet::empty(), 6).is_empty());
    }

    #[test]
    fn empirical_deletable_examples() {
        let none1 = GapSet::empty(1);
        assert!(empirical_deletable(&p("21"), &set("123"), &GapSet::empty(2), 2, 8).unwrap());
        assert!(!empirical_deletable(&p("1"), &set("123"), &none1, 1, 8).unwrap());
        assert!(empirical_deletable(&p("1"), &PatternSet::empty(), &none1, 1, 6).unwrap());
        assert!(empirical_deletable(&p("1"), &set("123"), &none1, 2, 6).is_err());
    }

    #[test]
    fn partition_over_prefix_classes() {
        for s in ["123", "132,4321", "2413,3142"] {
            let pats = set(s);
            for n in 0..=7 {
                let total = count_avoiders(n, &pats);
                let census = PrefixCensus::new(&pats, n, 3);
                for k in 0..=n.min(3) {
                    let mut sum = 0u64;
                    for sigma in all_perms(k) {
                        for_each_tuple(n, k, &mut |values| sum += census.class_size(n, &sigma, values));
                    }
                    assert_eq!(BigUint::from(sum), total, "{s}, n={n}, k={k}");
                }
            }
        }
    }

    #[test]
    fn counts_are_symmetry_invariant() {
        let pats = set("132,4231");
        for (_, img) in pats.symmetry_closure() {
            for n in 0..=7 {
                assert_eq!(count_avoiders(n, &img), count_avoiders(n, &pats));
            }
        }
    }

    #[test]
    fn tuples_enumerate_binomially() {
        let mut seen = Vec::new();
        for_each_tuple(4, 2, &mut |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 2]);
        assert_eq!(seen[5], vec![3, 4]);
        let mut empty = 0;
        for_each_tuple(3, 0, &mut |_| empty += 1);
        assert_eq!(empty, 1);
        for_each_tuple(2, 3, &mut |_| panic!("no 3-subsets of 1..=2"));
    }
}
