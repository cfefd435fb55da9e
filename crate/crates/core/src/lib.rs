//! Automatic discovery of prefix enumeration schemes for sets of forbidden
//! permutation patterns.
//!
//! A scheme splits the avoiders of a pattern set into prefix classes and
//! records, for each class, either how to refine it further or which prefix
//! entry can be deleted without changing the count. Found schemes are
//! evaluated as a polynomial-time dynamic program ([`counter`]), checked
//! against brute force ([`oracle`]) and fed to a recurrence guesser
//! ([`guesser`]).
//!
//! ```
//! use wilf_core::{counter, scheme, PatternSet};
//!
//! let patterns: PatternSet = "123".parse().unwrap();
//! let found = scheme::search(&patterns, 2).unwrap().scheme().unwrap();
//! let terms = counter::sequence(&found, 6).unwrap();
//! assert_eq!(terms.last().unwrap(), &132u32.into());
//! ```

pub mod counter;
pub mod error;
pub mod guesser;
pub mod oracle;
pub mod parallel;
pub mod perm;
pub mod reasoner;
pub mod scheme;

pub use error::{Error, Result};
pub use parallel::Execution;
pub use perm::{reduce, PatternSet, Permutation, Symmetry};
pub use reasoner::GapSet;
pub use scheme::{Scheme, SchemeMode, SearchResult};

/// Exact nonnegative count.
pub type BigCount = num_bigint::BigUint;
