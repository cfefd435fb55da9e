//! Evaluates a scheme as a dynamic program over prefix classes.
//!
//! `a_sigma(n; i_1..i_k)` is zero for zero classes and for tuples leaving
//! a forced gap open, sums over refinements for expanded classes, and drops
//! to `n - 1` for reducible classes. An expanded class whose prefix already
//! has length `n` is a single complete permutation and counts one.
//!
//! The bottom-up evaluator keeps only two length layers alive. Each layer
//! stores one dense table per class, indexed by the colexicographic rank of
//! the value tuple.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracle::ValueTuple;
use crate::parallel::{map_range, Execution};
use crate::perm::Permutation;
use crate::reasoner::GapSet;
use crate::scheme::Scheme;
use crate::BigCount;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountKey {
    pub sigma: Permutation,
    pub n: usize,
    pub tuple: ValueTuple,
}

impl CountKey {
    pub fn new(sigma: Permutation, n: usize, values: Vec<usize>) -> Result<Self> {
        let tuple = ValueTuple::new(n, values)?;
        if tuple.len() != sigma.len() {
            return Err(Error::InvalidInput(format!(
                "tuple {:?} has the wrong length for class {sigma}",
                tuple.values()
            )));
        }
        Ok(CountKey { sigma, n, tuple })
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Zero,
    Expand {
        gaps: GapSet,
        children: Vec<usize>,
    },
    Reduce {
        gaps: GapSet,
        rank: usize,
        target: usize,
    },
}

#[derive(Clone, Debug)]
struct Class {
    len: usize,
    rule: Rule,
}

type Memo = HashMap<(usize, usize, Vec<usize>), BigCount>;

/// A scheme compiled into class ids.
pub struct Counter {
    classes: Vec<Class>,
    ids: HashMap<Permutation, usize>,
    root: usize,
    by_len: Vec<Vec<usize>>,
}

impl Counter {
    pub fn new(scheme: &Scheme) -> Result<Self> {
        let mut ids = HashMap::new();
        let all: Vec<&Permutation> = scheme
            .expa
            .keys()
            .chain(scheme.redu.keys())
            .chain(scheme.zero.iter())
            .collect();
        for sigma in &all {
            let next = ids.len();
            ids.entry((*sigma).clone()).or_insert(next);
        }
        let lookup = |sigma: &Permutation, why: &str| {
            ids.get(sigma)
                .copied()
                .ok_or_else(|| Error::Integrity(format!("class {sigma} ({why}) is absent from the scheme")))
        };
        let mut classes = vec![
            Class {
                len: 0,
                rule: Rule::Zero
            };
            ids.len()
        ];
        for (sigma, e) in &scheme.expa {
            let children = e
                .refinements
                .iter()
                .map(|c| lookup(c, "refinement"))
                .collect::<Result<Vec<_>>>()?;
            if children.len() != sigma.len() + 1 {
                return Err(Error::Integrity(format!(
                    "class {sigma} has {} refinements",
                    children.len()
                )));
            }
            classes[ids[sigma]] = Class {
                len: sigma.len(),
                rule: Rule::Expand {
                    gaps: e.gaps.clone(),
                    children,
                },
            };
        }
        for (sigma, e) in &scheme.redu {
            let target = sigma
                .delete_rank(e.delete_rank)
                .map_err(|err| Error::Integrity(err.to_string()))?;
            let target = lookup(&target, "reduction target")?;
            classes[ids[sigma]] = Class {
                len: sigma.len(),
                rule: Rule::Reduce {
                    gaps: e.gaps.clone(),
                    rank: e.delete_rank,
                    target,
                },
            };
        }
        for sigma in &scheme.zero {
            classes[ids[sigma]].len = sigma.len();
        }
        let root = lookup(&Permutation::empty(), "root")?;
        if !matches!(classes[root].rule, Rule::Expand { .. }) {
            return Err(Error::Integrity("the empty class must be expanded".into()));
        }
        let depth = classes.iter().map(|c| c.len).max().unwrap_or(0);
        let mut by_len = vec![Vec::new(); depth + 1];
        for (id, c) in classes.iter().enumerate() {
            by_len[c.len].push(id);
        }
        Ok(Counter {
            classes,
            ids,
            root,
            by_len,
        })
    }

    fn id_of(&self, sigma: &Permutation) -> Result<usize> {
        self.ids
            .get(sigma)
            .copied()
            .ok_or_else(|| Error::Integrity(format!("class {sigma} is absent from the scheme")))
    }

    /// `a_sigma(n; tuple)` by memoized top-down recursion.
    pub fn count_class(&self, key: &CountKey) -> Result<BigCount> {
        let id = self.checked_id(key)?;
        let mut memo = Memo::new();
        Ok(self.eval(id, key.n, key.tuple.values(), &mut Some(&mut memo)))
    }

    /// The same recursion with no memo table; exponential, for cross-checks.
    pub fn count_class_unmemoized(&self, key: &CountKey) -> Result<BigCount> {
        let id = self.checked_id(key)?;
        Ok(self.eval(id, key.n, key.tuple.values(), &mut None))
    }

    fn checked_id(&self, key: &CountKey) -> Result<usize> {
        if key.tuple.len() != key.sigma.len() || key.tuple.n() != key.n {
            return Err(Error::InvalidInput(
                "count key tuple does not match its class".into(),
            ));
        }
        self.id_of(&key.sigma)
    }

    fn eval(&self, id: usize, n: usize, values: &[usize], memo: &mut Option<&mut Memo>) -> BigCount {
        if let Some(m) = memo.as_deref() {
            if let Some(v) = m.get(&(id, n, values.to_vec())) {
                return v.clone();
            }
        }
        let result = match &self.classes[id].rule {
            Rule::Zero => BigUint::zero(),
            Rule::Expand { gaps, .. } | Rule::Reduce { gaps, .. } if !gaps.obeyed_by(values, n) => {
                BigUint::zero()
            }
            Rule::Expand { .. } if values.len() == n => BigUint::one(),
            Rule::Expand { children, .. } => {
                let mut total = BigUint::zero();
                let mut longer = Vec::with_capacity(values.len() + 1);
                for_each_insertion(values, n, children, &mut |child, tuple| {
                    longer.clear();
                    longer.extend_from_slice(tuple);
                    total += self.eval(child, n, &longer, memo);
                });
                total
            }
            Rule::Reduce { rank, target, .. } => {
                let shorter = delete_value(values, *rank);
                self.eval(*target, n - 1, &shorter, memo)
            }
        };
        if let Some(m) = memo.as_deref_mut() {
            m.insert((id, n, values.to_vec()), result.clone());
        }
        result
    }

    /// `a(n; P)`.
    pub fn count(&self, n: usize) -> BigCount {
        self.layers_up_to(n, Execution::default(), |_, _| {})
    }

    /// Terms `n = 1..=len`.
    pub fn sequence(&self, len: usize) -> Vec<BigCount> {
        self.sequence_with(len, Execution::default())
    }

    pub fn sequence_with(&self, len: usize, exec: Execution) -> Vec<BigCount> {
        let mut terms = Vec::with_capacity(len);
        self.layers_up_to(len, exec, |n, a| {
            if n >= 1 {
                terms.push(a.clone());
            }
        });
        terms
    }

    /// Number of table entries the bottom-up evaluator holds for length `n`.
    pub fn layer_key_count(&self, n: usize) -> usize {
        let binom = Binomials::new(n, self.by_len.len());
        self.classes
            .iter()
            .filter(|c| !matches!(c.rule, Rule::Zero))
            .map(|c| binom.get(n, c.len))
            .sum()
    }

    /// Runs the layered evaluation for lengths `0..=last`, reporting each
    /// root value, and returns the last one.
    fn layers_up_to<F: FnMut(usize, &BigCount)>(
        &self,
        last: usize,
        exec: Execution,
        mut report: F,
    ) -> BigCount {
        let binom = Binomials::new(last + 1, self.by_len.len() + 1);
        let mut prev: Vec<Vec<BigCount>> = Vec::new();
        let mut root_value = BigUint::zero();
        for n in 0..=last {
            let layer = self.layer(n, &prev, &binom, exec);
            root_value = layer[self.root][0].clone();
            report(n, &root_value);
            prev = layer;
        }
        root_value
    }

    fn layer(
        &self,
        n: usize,
        prev: &[Vec<BigCount>],
        binom: &Binomials,
        exec: Execution,
    ) -> Vec<Vec<BigCount>> {
        let mut tables: Vec<Vec<BigCount>> = vec![Vec::new(); self.classes.len()];
        for ids in self.by_len.iter().rev() {
            for &id in ids {
                let class = &self.classes[id];
                if matches!(class.rule, Rule::Zero) {
                    continue;
                }
                let k = class.len;
                let size = binom.get(n, k);
                let current = &tables;
                let table = map_range(exec, size, |idx| {
                    let values = binom.unrank(idx, k);
                    self.layer_value(id, n, &values, current, prev, binom)
                });
                tables[id] = table;
            }
        }
        tables
    }

    fn layer_value(
        &self,
        id: usize,
        n: usize,
        values: &[usize],
        current: &[Vec<BigCount>],
        prev: &[Vec<BigCount>],
        binom: &Binomials,
    ) -> BigCount {
        let fetch = |tables: &[Vec<BigCount>], id: usize, tuple: &[usize]| -> BigCount {
            match self.classes[id].rule {
                Rule::Zero => BigUint::zero(),
                _ => tables[id][binom.rank(tuple)].clone(),
            }
        };
        match &self.classes[id].rule {
            Rule::Zero => BigUint::zero(),
            Rule::Expand { gaps, .. } | Rule::Reduce { gaps, .. } if !gaps.obeyed_by(values, n) => {
                BigUint::zero()
            }
            Rule::Expand { .. } if values.len() == n => BigUint::one(),
            Rule::Expand { children, .. } => {
                let mut total = BigUint::zero();
                for_each_insertion(values, n, children, &mut |child, tuple| {
                    if !matches!(self.classes[child].rule, Rule::Zero) {
                        total += &current[child][binom.rank(tuple)];
                    }
                });
                total
            }
            Rule::Reduce { rank, target, .. } => fetch(prev, *target, &delete_value(values, *rank)),
        }
    }
}

/// Calls `f(child, tuple)` for every refinement slot `j` and every value
/// `r` strictly inside gap `j - 1`, with `r` inserted at slot `j`.
fn for_each_insertion(values: &[usize], n: usize, children: &[usize], f: &mut dyn FnMut(usize, &[usize])) {
    let k = values.len();
    let mut tuple = Vec::with_capacity(k + 1);
    for j in 1..=k + 1 {
        let lo = if j == 1 { 0 } else { values[j - 2] };
        let hi = if j == k + 1 { n + 1 } else { values[j - 1] };
        for r in lo + 1..hi {
            tuple.clear();
            tuple.extend_from_slice(&values[..j - 1]);
            tuple.push(r);
            tuple.extend_from_slice(&values[j - 1..]);
            f(children[j - 1], &tuple);
        }
    }
}

/// Drops `i_rank` and shifts the larger values down by one.
fn delete_value(values: &[usize], rank: usize) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|&(j, _)| j + 1 != rank)
        .map(|(j, &v)| if j + 1 > rank { v - 1 } else { v })
        .collect()
}

/// Binomial table for colexicographic ranking of increasing tuples.
struct Binomials {
    table: Vec<Vec<usize>>,
}

impl Binomials {
    fn new(max_n: usize, max_k: usize) -> Self {
        let mut table = vec![vec![0usize; max_k + 1]; max_n + 1];
        for n in 0..=max_n {
            table[n][0] = 1;
            for k in 1..=max_k.min(n) {
                table[n][k] = table[n - 1][k - 1].saturating_add(if k < n { table[n - 1][k] } else { 0 });
            }
        }
        Binomials { table }
    }

    fn get(&self, n: usize, k: usize) -> usize {
        if k > n {
            0
        } else {
            self.table[n][k]
        }
    }

    fn rank(&self, values: &[usize]) -> usize {
        values
            .iter()
            .enumerate()
            .map(|(j, &v)| self.get(v - 1, j + 1))
            .sum()
    }

    fn unrank(&self, mut idx: usize, k: usize) -> Vec<usize> {
        let mut values = vec![0; k];
        for j in (1..=k).rev() {
            let mut c = j - 1;
            while self.get(c + 1, j) <= idx {
                c += 1;
            }
            idx -= self.get(c, j);
            values[j - 1] = c + 1;
        }
        values
    }
}

pub fn count_class(scheme: &Scheme, key: &CountKey) -> Result<BigCount> {
    Counter::new(scheme)?.count_class(key)
}

pub fn count(scheme: &Scheme, n: usize) -> Result<BigCount> {
    Ok(Counter::new(scheme)?.count(n))
}

/// Terms `a(1), ..., a(len)`.
pub fn sequence(scheme: &Scheme, len: usize) -> Result<Vec<BigCount>> {
    if len == 0 {
        return Err(Error::InvalidInput("sequence length must be at least 1".into()));
    }
    Ok(Counter::new(scheme)?.sequence(len))
}
