#![allow(dead_code)]

use proptest::prelude::*;
use wilf_core::{PatternSet, Permutation};

pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

pub fn set(s: &str) -> PatternSet {
    s.parse().unwrap()
}

/// All permutations of length `n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    fn go(n: usize, acc: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if acc.len() == n {
            out.push(Permutation::new(acc.clone()).unwrap());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                acc.push(v);
                go(n, acc, used, out);
                acc.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// Increasing `k`-subsets of `1..=n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(next: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for v in next..=n {
            acc.push(v);
            go(v + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn arb_perm(max_len: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_len).prop_flat_map(|n| {
        Just((1..=n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

pub fn arb_nonempty_perm(min_len: usize, max_len: usize) -> impl Strategy<Value = Permutation> {
    (min_len..=max_len).prop_flat_map(|n| {
        Just((1..=n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

/// Pattern sets of one to three patterns of length 3 or 4.
pub fn arb_pattern_set() -> impl Strategy<Value = PatternSet> {
    prop::collection::vec(arb_nonempty_perm(3, 4), 1..=3).prop_map(|v| PatternSet::new(v).unwrap())
}
