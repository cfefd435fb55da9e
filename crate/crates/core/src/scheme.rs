//! Prefix schemes: the `[Redu, Expa, A, B, C]` tables plus the set of
//! classes known to be empty, their validation, discovery and JSON form.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{map_slice, Execution};
use crate::perm::{PatternSet, Permutation, Symmetry};
use crate::reasoner::{self, ClassProof, GapSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeMode {
    /// Every gap set and deletable rank was proved by the reasoner.
    Certified,
    /// Checked on small lengths only.
    Empirical,
}

impl fmt::Display for SchemeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeMode::Certified => "certified",
            SchemeMode::Empirical => "empirical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpaEntry {
    pub gaps: GapSet,
    /// `refinements[j - 1]` ends in `j`.
    pub refinements: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduEntry {
    pub delete_rank: usize,
    pub gaps: GapSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub patterns: PatternSet,
    pub mode: SchemeMode,
    pub expa: BTreeMap<Permutation, ExpaEntry>,
    pub redu: BTreeMap<Permutation, ReduEntry>,
    pub zero: BTreeSet<Permutation>,
}

impl Scheme {
    /// Length of the longest prefix class the scheme mentions.
    pub fn depth(&self) -> usize {
        self.expa
            .keys()
            .chain(self.redu.keys())
            .chain(self.zero.iter())
            .map(Permutation::len)
            .max()
            .unwrap_or(0)
    }

    pub fn knows(&self, sigma: &Permutation) -> bool {
        self.expa.contains_key(sigma) || self.redu.contains_key(sigma) || self.zero.contains(sigma)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&SchemeDocument::from(self)).expect("scheme serializes");
        s.push('\n');
        s
    }

    /// Parses and validates a scheme document.
    pub fn from_json(text: &str) -> Result<Scheme> {
        let doc: SchemeDocument = serde_json::from_str(text)?;
        doc.into_scheme()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingRoot,
    Duplicate(Permutation),
    Overlap(Permutation),
    WrongRefinements(Permutation),
    Unclassified { parent: Permutation, child: Permutation },
    RankOutOfRange { sigma: Permutation, rank: usize },
    GapOutOfRange { sigma: Permutation, gap: usize },
    ReductionTargetMissing { sigma: Permutation, target: Permutation },
    ContainsPattern(Permutation),
    ZeroAvoids(Permutation),
    UnsupportedVersion(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingRoot => write!(f, "empty permutation absent from expa"),
            Violation::Duplicate(s) => write!(f, "class {s} listed twice"),
            Violation::Overlap(s) => write!(f, "class {s} appears in more than one of expa, redu, zero"),
            Violation::WrongRefinements(s) => {
                write!(
                    f,
                    "refinements of {s} must be its {} refinements ordered by last entry",
                    s.len() + 1
                )
            }
            Violation::Unclassified { parent, child } => {
                write!(f, "refinement {child} of {parent} is not in expa, redu or zero")
            }
            Violation::RankOutOfRange { sigma, rank } => {
                write!(f, "delete rank {rank} out of range for {sigma}")
            }
            Violation::GapOutOfRange { sigma, gap } => write!(f, "gap {gap} out of range for {sigma}"),
            Violation::ReductionTargetMissing { sigma, target } => {
                write!(f, "reduction of {sigma} leads to unknown class {target}")
            }
            Violation::ContainsPattern(s) => write!(f, "class {s} contains a forbidden pattern"),
            Violation::ZeroAvoids(s) => write!(f, "zero class {s} avoids every pattern"),
            Violation::UnsupportedVersion(v) => write!(f, "unsupported schema version {v}"),
        }
    }
}

/// Structural checks only; correctness of gaps and ranks is the
/// certifier's business.
pub fn validate(s: &Scheme) -> Vec<Violation> {
    let mut out = Vec::new();
    if !s.expa.contains_key(&Permutation::empty()) {
        out.push(Violation::MissingRoot);
    }
    for sigma in s.expa.keys().chain(s.redu.keys()).chain(s.zero.iter()) {
        let places = usize::from(s.expa.contains_key(sigma))
            + usize::from(s.redu.contains_key(sigma))
            + usize::from(s.zero.contains(sigma));
        if places > 1 && !out.contains(&Violation::Overlap(sigma.clone())) {
            out.push(Violation::Overlap(sigma.clone()));
        }
    }
    for (sigma, entry) in &s.expa {
        if entry.refinements != sigma.refinements() {
            out.push(Violation::WrongRefinements(sigma.clone()));
        }
        for child in &entry.refinements {
            if !s.knows(child) {
                out.push(Violation::Unclassified {
                    parent: sigma.clone(),
                    child: child.clone(),
                });
            }
        }
        if entry.gaps.k() != sigma.len() {
            out.push(Violation::GapOutOfRange {
                sigma: sigma.clone(),
                gap: entry.gaps.k(),
            });
        }
        if s.patterns.hits(sigma) {
            out.push(Violation::ContainsPattern(sigma.clone()));
        }
    }
    for (sigma, entry) in &s.redu {
        match sigma.delete_rank(entry.delete_rank) {
            Ok(target) if !s.knows(&target) => out.push(Violation::ReductionTargetMissing {
                sigma: sigma.clone(),
                target,
            }),
            Ok(_) => {}
            Err(_) => out.push(Violation::RankOutOfRange {
                sigma: sigma.clone(),
                rank: entry.delete_rank,
            }),
        }
        if entry.gaps.k() != sigma.len() {
            out.push(Violation::GapOutOfRange {
                sigma: sigma.clone(),
                gap: entry.gaps.k(),
            });
        }
        if s.patterns.hits(sigma) {
            out.push(Violation::ContainsPattern(sigma.clone()));
        }
    }
    for sigma in &s.zero {
        if !s.patterns.hits(sigma) {
            out.push(Violation::ZeroAvoids(sigma.clone()));
        }
    }
    out
}

/// Decides gap sets and deletable ranks during search.
pub trait Certifier: Sync {
    fn mode(&self) -> SchemeMode;
    fn patterns(&self) -> &PatternSet;
    fn gap_set(&self, sigma: &Permutation) -> GapSet;
    fn deletable_rank(&self, sigma: &Permutation, gaps: &GapSet) -> Option<usize>;

    fn explain(&self, _sigma: &Permutation) -> Option<ClassProof> {
        None
    }
}

/// The symbolic reasoner.
pub struct RigorousCertifier {
    patterns: PatternSet,
}

impl RigorousCertifier {
    pub fn new(patterns: &PatternSet) -> Self {
        RigorousCertifier {
            patterns: patterns.clone(),
        }
    }
}

impl Certifier for RigorousCertifier {
    fn mode(&self) -> SchemeMode {
        SchemeMode::Certified
    }

    fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    fn gap_set(&self, sigma: &Permutation) -> GapSet {
        reasoner::compute_gap_set(sigma, &self.patterns)
    }

    fn deletable_rank(&self, sigma: &Permutation, gaps: &GapSet) -> Option<usize> {
        reasoner::find_deletable_rank(sigma, &self.patterns, gaps)
    }

    fn explain(&self, sigma: &Permutation) -> Option<ClassProof> {
        Some(reasoner::explain_class(sigma, &self.patterns))
    }
}

/// Why a bounded search gave up: `sigma` needed expansion at the depth
/// bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchFailure {
    pub patterns: PatternSet,
    pub max_depth: usize,
    pub sigma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found(Scheme),
    Exhausted(SearchFailure),
}

impl SearchResult {
    pub fn scheme(self) -> Option<Scheme> {
        match self {
            SearchResult::Found(s) => Some(s),
            SearchResult::Exhausted(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchResult::Found(_))
    }
}

enum Disposition {
    Zero,
    Reduce(ReduEntry),
    Expand(GapSet),
}

fn classify<C: Certifier + ?Sized>(certifier: &C, sigma: &Permutation) -> Disposition {
    if certifier.patterns().hits(sigma) {
        return Disposition::Zero;
    }
    let gaps = certifier.gap_set(sigma);
    match certifier.deletable_rank(sigma, &gaps) {
        Some(delete_rank) => Disposition::Reduce(ReduEntry { delete_rank, gaps }),
        None => Disposition::Expand(gaps),
    }
}

/// Breadth-first scheme search with the rigorous reasoner.
pub fn search(patterns: &PatternSet, max_depth: usize) -> Result<SearchResult> {
    search_with(&RigorousCertifier::new(patterns), max_depth)
}

pub fn search_with<C: Certifier + ?Sized>(certifier: &C, max_depth: usize) -> Result<SearchResult> {
    search_inner(certifier, max_depth, Execution::default())
}

/// Like [`search`], also returning the reasoner's transcript for every
/// class placed in expa or redu.
pub fn search_explained(patterns: &PatternSet, max_depth: usize) -> Result<(SearchResult, Vec<ClassProof>)> {
    let certifier = RigorousCertifier::new(patterns);
    let result = search_inner(&certifier, max_depth, Execution::default())?;
    let classes: Vec<Permutation> = match &result {
        SearchResult::Found(s) => s.expa.keys().chain(s.redu.keys()).cloned().collect(),
        SearchResult::Exhausted(f) => vec![f.sigma.clone()],
    };
    let proofs = map_slice(Execution::default(), &classes, |sigma| certifier.explain(sigma))
        .into_iter()
        .flatten()
        .collect();
    Ok((result, proofs))
}

fn search_inner<C: Certifier + ?Sized>(
    certifier: &C,
    max_depth: usize,
    exec: Execution,
) -> Result<SearchResult> {
    if max_depth == 0 {
        return Err(Error::InvalidInput("max depth must be at least 1".into()));
    }
    let root = Permutation::empty();
    let mut scheme = Scheme {
        patterns: certifier.patterns().clone(),
        mode: certifier.mode(),
        expa: BTreeMap::new(),
        redu: BTreeMap::new(),
        zero: BTreeSet::new(),
    };
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut frontier = root.refinements();
    seen.insert(root.clone());
    seen.extend(frontier.iter().cloned());
    scheme.expa.insert(
        root.clone(),
        ExpaEntry {
            gaps: certifier.gap_set(&root),
            refinements: root.refinements(),
        },
    );

    while !frontier.is_empty() {
        let dispositions = map_slice(exec, &frontier, |sigma| classify(certifier, sigma));
        let mut next = Vec::new();
        for (sigma, disposition) in frontier.into_iter().zip(dispositions) {
            match disposition {
                Disposition::Zero => {
                    scheme.zero.insert(sigma);
                }
                Disposition::Reduce(entry) => {
                    // Reduction targets are not always children of an
                    // expanded class; they need a disposition of their own.
                    let target = sigma.delete_rank(entry.delete_rank)?;
                    if seen.insert(target.clone()) {
                        next.push(target);
                    }
                    scheme.redu.insert(sigma, entry);
                }
                Disposition::Expand(gaps) => {
                    if sigma.len() >= max_depth {
                        return Ok(SearchResult::Exhausted(SearchFailure {
                            patterns: scheme.patterns,
                            max_depth,
                            sigma,
                        }));
                    }
                    let refinements = sigma.refinements();
                    for child in &refinements {
                        if seen.insert(child.clone()) {
                            next.push(child.clone());
                        }
                    }
                    scheme.expa.insert(sigma, ExpaEntry { gaps, refinements });
                }
            }
        }
        frontier = next;
    }
    debug_assert!(validate(&scheme).is_empty());
    Ok(SearchResult::Found(scheme))
}

/// A scheme for a symmetric image of the requested pattern set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricScheme {
    pub scheme: Scheme,
    /// Maps the requested patterns onto `scheme.patterns`.
    pub symmetry: Symmetry,
}

/// Tries every distinct symmetric image of `patterns` in canonical order.
/// Each symmetry is a bijection on permutations carrying avoiders of the
/// original set to avoiders of the image, so counts carry over.
pub fn search_with_symmetries(patterns: &PatternSet, max_depth: usize) -> Result<Option<SymmetricScheme>> {
    for (symmetry, image) in patterns.symmetry_closure() {
        if let SearchResult::Found(scheme) = search(&image, max_depth)? {
            return Ok(Some(SymmetricScheme { scheme, symmetry }));
        }
    }
    Ok(None)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpaDoc {
    sigma: Permutation,
    gaps: Vec<usize>,
    refinements: Vec<Permutation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduDoc {
    sigma: Permutation,
    delete_rank: usize,
    gaps: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDocument {
    #[serde(default = "default_version")]
    schema_version: u32,
    patterns: PatternSet,
    mode: SchemeMode,
    expa: Vec<ExpaDoc>,
    redu: Vec<ReduDoc>,
    zero: Vec<Permutation>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

impl From<&Scheme> for SchemeDocument {
    fn from(s: &Scheme) -> Self {
        SchemeDocument {
            schema_version: SCHEMA_VERSION,
            patterns: s.patterns.clone(),
            mode: s.mode,
            expa: s
                .expa
                .iter()
                .map(|(sigma, e)| ExpaDoc {
                    sigma: sigma.clone(),
                    gaps: e.gaps.to_vec(),
                    refinements: e.refinements.clone(),
                })
                .collect(),
            redu: s
                .redu
                .iter()
                .map(|(sigma, e)| ReduDoc {
                    sigma: sigma.clone(),
                    delete_rank: e.delete_rank,
                    gaps: e.gaps.to_vec(),
                })
                .collect(),
            zero: s.zero.iter().cloned().collect(),
        }
    }
}

impl SchemeDocument {
    fn into_scheme(self) -> Result<Scheme> {
        let mut violations = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            violations.push(Violation::UnsupportedVersion(self.schema_version));
        }
        let mut gaps_for = |sigma: &Permutation, raw: &[usize]| {
            let mut gaps = GapSet::empty(sigma.len());
            for &j in raw {
                if j > sigma.len() {
                    violations.push(Violation::GapOutOfRange {
                        sigma: sigma.clone(),
                        gap: j,
                    });
                } else {
                    gaps.insert(j);
                }
            }
            gaps
        };
        let mut expa = BTreeMap::new();
        let mut duplicates = Vec::new();
        for e in self.expa {
            let gaps = gaps_for(&e.sigma, &e.gaps);
            let entry = ExpaEntry {
                gaps,
                refinements: e.refinements,
            };
            if expa.insert(e.sigma.clone(), entry).is_some() {
                duplicates.push(Violation::Duplicate(e.sigma));
            }
        }
        let mut redu = BTreeMap::new();
        for r in self.redu {
            let gaps = gaps_for(&r.sigma, &r.gaps);
            let entry = ReduEntry {
                delete_rank: r.delete_rank,
                gaps,
            };
            if redu.insert(r.sigma.clone(), entry).is_some() {
                duplicates.push(Violation::Duplicate(r.sigma));
            }
        }
        let mut zero = BTreeSet::new();
        for z in self.zero {
            if !zero.insert(z.clone()) {
                duplicates.push(Violation::Duplicate(z));
            }
        }
        violations.extend(duplicates);
        let scheme = Scheme {
            patterns: self.patterns,
            mode: self.mode,
            expa,
            redu,
            zero,
        };
        violations.extend(validate(&scheme));
        if violations.is_empty() {
            Ok(scheme)
        } else {
            Err(Error::Validation(violations))
        }
    }
}
