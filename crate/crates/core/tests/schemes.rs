mod common;

use std::collections::BTreeSet;

use common::{arb_pattern_set, perm, set, subsets};
use proptest::prelude::*;
use wilf_core::counter::{CountKey, Counter};
use wilf_core::oracle::{count_avoiders, empirical_scheme_search, prefix_class_members, ValueTuple};
use wilf_core::scheme::{search, search_with_symmetries, validate};
use wilf_core::{BigCount, Execution, PatternSet, Permutation, Scheme, SchemeMode};

fn oracle_terms(patterns: &PatternSet, len: usize) -> Vec<BigCount> {
    (1..=len).map(|n| count_avoiders(n, patterns)).collect()
}

fn classes(s: &Scheme) -> Vec<Permutation> {
    s.expa
        .keys()
        .chain(s.redu.keys())
        .chain(s.zero.iter())
        .cloned()
        .collect()
}

/// Every class count of the scheme equals the number of class members.
fn check_every_class(s: &Scheme, max_n: usize) -> Result<(), TestCaseError> {
    let counter = Counter::new(s).unwrap();
    for sigma in classes(s) {
        let k = sigma.len();
        for n in k..=max_n {
            for values in subsets(n, k) {
                let tuple = ValueTuple::new(n, values.clone()).unwrap();
                let members = prefix_class_members(n, &s.patterns, &sigma, &tuple)
                    .unwrap()
                    .len();
                let key = CountKey::new(sigma.clone(), n, values).unwrap();
                prop_assert_eq!(
                    counter.count_class(&key).unwrap(),
                    BigCount::from(members),
                    "class {} tuple {:?} under {}",
                    sigma,
                    key.tuple.values(),
                    s.patterns
                );
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certified_schemes_count_correctly(patterns in arb_pattern_set()) {
        if let Some(s) = search(&patterns, 3).unwrap().scheme() {
            prop_assert!(validate(&s).is_empty());
            prop_assert_eq!(s.mode, SchemeMode::Certified);
            prop_assert_eq!(Counter::new(&s).unwrap().sequence(8), oracle_terms(&patterns, 8));
            check_every_class(&s, 6)?;
        }
    }

    #[test]
    fn symmetric_schemes_count_the_original(patterns in arb_pattern_set()) {
        if let Some(found) = search_with_symmetries(&patterns, 3).unwrap() {
            prop_assert_eq!(found.scheme.patterns.clone(), patterns.image(found.symmetry));
            prop_assert_eq!(Counter::new(&found.scheme).unwrap().sequence(8), oracle_terms(&patterns, 8));
        }
    }

    #[test]
    fn documents_round_trip(patterns in arb_pattern_set()) {
        if let Some(s) = search(&patterns, 3).unwrap().scheme() {
            let text = s.to_json();
            prop_assert_eq!(Scheme::from_json(&text).unwrap(), s);
        }
    }
}

#[test]
fn memoized_and_plain_evaluation_agree() {
    for p in ["123", "132", "123,132", "1234,1324,1243"] {
        let patterns = set(p);
        let s = search(&patterns, 4).unwrap().scheme().unwrap();
        let counter = Counter::new(&s).unwrap();
        for sigma in classes(&s) {
            let k = sigma.len();
            for n in k..=6 {
                for values in subsets(n, k) {
                    let key = CountKey::new(sigma.clone(), n, values).unwrap();
                    assert_eq!(
                        counter.count_class(&key).unwrap(),
                        counter.count_class_unmemoized(&key).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn sequential_and_parallel_layers_agree() {
    let s = search(&set("1234,1324,1243"), 4).unwrap().scheme().unwrap();
    let counter = Counter::new(&s).unwrap();
    assert_eq!(
        counter.sequence_with(12, Execution::Sequential),
        counter.sequence_with(12, Execution::Parallel)
    );
}

#[test]
fn class_counts_for_known_schemes() {
    for (p, depth) in [
        ("123", 2),
        ("132", 2),
        ("123,132", 2),
        ("", 1),
        ("12", 1),
        ("1234,1324,1243", 4),
    ] {
        let s = search(&set(p), depth).unwrap().scheme().unwrap();
        check_every_class(&s, 7).unwrap();
    }
}

fn perms(list: &[&str]) -> BTreeSet<Permutation> {
    list.iter().map(|s| perm(s)).collect()
}

#[test]
fn empirical_search_examples() {
    let s = empirical_scheme_search(&set("123"), 2, 8)
        .unwrap()
        .scheme()
        .unwrap();
    assert_eq!(s.mode, SchemeMode::Empirical);
    assert_eq!(
        s.expa.keys().cloned().collect::<BTreeSet<_>>(),
        perms(&["[]", "1"])
    );
    assert_eq!(
        s.redu.keys().cloned().collect::<BTreeSet<_>>(),
        perms(&["12", "21"])
    );
    assert_eq!(
        Counter::new(&s).unwrap().sequence(10),
        oracle_terms(&set("123"), 10)
    );

    let s = empirical_scheme_search(&set("12"), 1, 8)
        .unwrap()
        .scheme()
        .unwrap();
    assert_eq!(s.depth(), 1);
    assert_eq!(
        Counter::new(&s).unwrap().sequence(8),
        vec![BigCount::from(1u32); 8]
    );

    let s = empirical_scheme_search(&set("1"), 1, 8)
        .unwrap()
        .scheme()
        .unwrap();
    assert_eq!(s.expa[&Permutation::empty()].gaps.to_vec(), vec![0]);
    assert_eq!(s.zero, perms(&["1"]));
    assert_eq!(
        Counter::new(&s).unwrap().sequence(5),
        vec![BigCount::from(0u32); 5]
    );

    assert!(empirical_scheme_search(&set("123"), 9, 8).is_err());
}

#[test]
fn empirical_and_certified_agree_where_both_succeed() {
    for p in ["123", "132", "123,132", "1234,1324,1243", "321,3412"] {
        let patterns = set(p);
        let Some(certified) = search(&patterns, 4).unwrap().scheme() else {
            continue;
        };
        let empirical = empirical_scheme_search(&patterns, 4, 8)
            .unwrap()
            .scheme()
            .unwrap();
        assert_eq!(
            Counter::new(&certified).unwrap().sequence(10),
            Counter::new(&empirical).unwrap().sequence(10)
        );
    }
}
