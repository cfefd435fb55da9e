mod common;

use common::{all_perms, arb_perm, perm, set};
use proptest::prelude::*;
use wilf_core::{reduce, PatternSet, Permutation, Symmetry};

proptest! {
    #[test]
    fn reduce_is_idempotent(p in arb_perm(9)) {
        prop_assert_eq!(reduce(p.entries()).unwrap(), p);
    }

    #[test]
    fn reduce_matches_relative_order(word in prop::collection::hash_set(-50i32..50, 0..9)) {
        let word: Vec<i32> = word.into_iter().collect();
        let r = reduce(&word).unwrap();
        for a in 0..word.len() {
            for b in 0..word.len() {
                prop_assert_eq!(word[a] < word[b], r.entries()[a] < r.entries()[b]);
            }
        }
    }

    #[test]
    fn involutions(p in arb_perm(9)) {
        prop_assert_eq!(p.reverse().reverse(), p.clone());
        prop_assert_eq!(p.complement().complement(), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p.clone());
    }

    #[test]
    fn containment_is_symmetry_equivariant(host in arb_perm(7), q in arb_perm(4)) {
        for g in Symmetry::ALL {
            prop_assert_eq!(host.contains(&q), g.apply(&host).contains(&g.apply(&q)));
        }
    }

    #[test]
    fn containment_is_transitive(a in arb_perm(7), b in arb_perm(5), c in arb_perm(3)) {
        if a.contains(&b) && b.contains(&c) {
            prop_assert!(a.contains(&c));
        }
    }

    #[test]
    fn every_subsequence_is_contained(host in arb_perm(8), mask in any::<u8>()) {
        let picked: Vec<usize> = host
            .entries()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        prop_assert!(host.contains(&reduce(&picked).unwrap()));
    }

    #[test]
    fn refinements_have_this_parent(p in arb_perm(7)) {
        let kids = p.refinements();
        prop_assert_eq!(kids.len(), p.len() + 1);
        for (j, kid) in kids.iter().enumerate() {
            prop_assert_eq!(kid.parent().unwrap(), p.clone());
            prop_assert_eq!(*kid.entries().last().unwrap(), j + 1);
        }
    }

    #[test]
    fn delete_rank_matches_reduction(p in arb_perm(8), r in 1usize..9) {
        match p.delete_rank(r) {
            Ok(q) => {
                let rest: Vec<usize> = p.entries().iter().copied().filter(|&v| v != r).collect();
                prop_assert_eq!(q, reduce(&rest).unwrap());
            }
            Err(_) => prop_assert!(r > p.len()),
        }
    }

    #[test]
    fn display_round_trips(p in arb_perm(12)) {
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }
}

#[test]
fn brute_force_containment_agrees() {
    // Containment through every subset of positions.
    let naive = |host: &Permutation, q: &Permutation| {
        let n = host.len();
        (0u32..1 << n).any(|m| {
            m.count_ones() as usize == q.len() && {
                let sub: Vec<usize> = (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| host.entries()[i])
                    .collect();
                reduce(&sub).unwrap() == *q
            }
        })
    };
    let hosts = all_perms(6);
    for q in all_perms(3).iter().chain(all_perms(4).iter()) {
        for host in &hosts {
            assert_eq!(host.contains(q), naive(host, q), "{host} / {q}");
        }
    }
}

#[test]
fn symmetry_closure_of_a_single_pattern() {
    let images: Vec<PatternSet> = set("132")
        .symmetry_closure()
        .into_iter()
        .map(|(_, s)| s)
        .collect();
    let expect: Vec<PatternSet> = ["132", "231", "312", "213"].iter().map(|s| set(s)).collect();
    assert_eq!(images, expect);
    assert_eq!(set("123").symmetry_closure().len(), 2);
    assert_eq!(set("").symmetry_closure().len(), 1);
    assert_eq!(set("2413").symmetry_closure().len(), 2);
    assert!(perm("2413").contains(&perm("12")));
}
