//! Guessing linear recurrences with polynomial coefficients.
//!
//! For order `d` and degree `e` the unknowns are the coefficients
//! `c[j][l]` of `p_j(n) = sum_l c[j][l] n^l`, and each index `n` with
//! `a(n)..a(n+d)` known gives one homogeneous equation
//! `sum_j p_j(n) a(n+j) = 0`. The system is solved exactly by fraction-free
//! elimination over the integers. Terms are indexed from `n = 1`.
//!
//! Results are conjectures: they fit the data, nothing more.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::{map_slice, Execution};

pub const DEFAULT_GUARD: usize = 5;
pub const DEFAULT_MAX_ORDER: usize = 2;
pub const DEFAULT_MAX_DEGREE: usize = 2;

/// `sum_{j=0}^{d} p_j(n) a(n + j) = 0` with `p_d` not identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCandidate {
    degree: usize,
    /// `coefficients[j][l]` multiplies `n^l a(n + j)`.
    coefficients: Vec<Vec<BigInt>>,
}

impl RecurrenceCandidate {
    /// Normalizes the content and sign. Rejects an identically zero leading
    /// polynomial.
    pub fn new(coefficients: Vec<Vec<BigInt>>) -> Result<Self> {
        let degree = coefficients
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1);
        let mut coefficients: Vec<Vec<BigInt>> = coefficients
            .into_iter()
            .map(|mut p| {
                p.resize(degree + 1, BigInt::zero());
                p
            })
            .collect();
        match coefficients.last() {
            Some(lead) if lead.iter().any(|c| !c.is_zero()) => {}
            _ => {
                return Err(Error::InvalidInput(
                    "leading coefficient polynomial must not vanish".into(),
                ))
            }
        }
        let content = coefficients
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let lead = coefficients
            .last()
            .and_then(|p| p.iter().rev().find(|c| !c.is_zero()))
            .expect("checked above");
        let scale = if lead.is_negative() { -content } else { content };
        for c in coefficients.iter_mut().flatten() {
            *c = &*c / &scale;
        }
        Ok(RecurrenceCandidate { degree, coefficients })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[Vec<BigInt>] {
        &self.coefficients
    }

    fn residual(&self, terms: &[BigInt], n: usize) -> BigInt {
        let nn = BigInt::from(n);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, p)| eval_poly(p, &nn) * &terms[n - 1 + j])
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            order: usize,
            degree: usize,
            coefficients: Vec<Vec<serde_json::Number>>,
            text: String,
        }
        let doc = Doc {
            order: self.order(),
            degree: self.degree,
            coefficients: self
                .coefficients
                .iter()
                .map(|p| p.iter().map(big_number).collect())
                .collect(),
            text: self.to_string(),
        };
        serde_json::to_value(doc).expect("candidate serializes")
    }
}

pub(crate) fn big_number<T: ToString>(v: &T) -> serde_json::Number {
    v.to_string().parse().expect("integers are valid JSON numbers")
}

fn eval_poly(p: &[BigInt], n: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

fn render_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (l, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push(if c.is_negative() { '-' } else { '+' });
        }
        let var = match l {
            0 => String::new(),
            1 => "n".to_string(),
            _ => format!("n^{l}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}*{var}"));
        }
    }
    out
}

impl fmt::Display for RecurrenceCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, p) in self.coefficients.iter().enumerate().rev() {
            let nonzero: Vec<&BigInt> = p.iter().filter(|c| !c.is_zero()).collect();
            if nonzero.is_empty() {
                continue;
            }
            let negative = nonzero.iter().all(|c| c.is_negative());
            let shown: Vec<BigInt> = if negative {
                p.iter().map(|c| -c).collect()
            } else {
                p.clone()
            };
            let body = render_poly(&shown);
            let single = nonzero.len() == 1;
            let term = match j {
                0 => "a(n)".to_string(),
                _ => format!("a(n+{j})"),
            };
            let factor = if single && body == "1" {
                term
            } else if single && !body.starts_with('-') {
                format!("{body}*{term}")
            } else {
                format!("({body})*{term}")
            };
            match (first, negative) {
                (true, true) => write!(f, "-{factor}")?,
                (true, false) => write!(f, "{factor}")?,
                (false, true) => write!(f, " - {factor}")?,
                (false, false) => write!(f, " + {factor}")?,
            }
            first = false;
        }
        f.write_str(" = 0")
    }
}

/// Minimum number of terms for a search up to the given bounds.
pub fn required_terms(max_order: usize, max_degree: usize, guard: usize) -> usize {
    (max_order + 1) * (max_degree + 1) + max_order + guard
}

/// Checks the recurrence at every index where all its terms are known.
pub fn verify_recurrence(rec: &RecurrenceCandidate, terms: &[BigUint]) -> bool {
    let terms: Vec<BigInt> = terms.iter().cloned().map(BigInt::from).collect();
    let d = rec.order();
    (1..=terms.len().saturating_sub(d)).all(|n| rec.residual(&terms, n).is_zero())
}

/// Searches `(order, degree)` pairs by increasing `order + degree`, then
/// order, and returns the first candidate fitted on all but the last
/// `guard` terms that also holds on those.
pub fn guess_recurrence(
    terms: &[BigUint],
    max_order: usize,
    max_degree: usize,
    guard: usize,
) -> Result<Option<RecurrenceCandidate>> {
    let required = required_terms(max_order, max_degree, guard);
    if terms.len() < required {
        return Err(Error::InsufficientTerms {
            required,
            available: terms.len(),
        });
    }
    let ints: Vec<BigInt> = terms.iter().cloned().map(BigInt::from).collect();
    let mut shapes = Vec::new();
    for total in 0..=max_order + max_degree {
        for d in 0..=max_order.min(total) {
            let e = total - d;
            if e <= max_degree {
                shapes.push((d, e));
            }
        }
    }
    let fits = map_slice(Execution::default(), &shapes, |&(d, e)| fit(&ints, d, e, guard));
    Ok(fits.into_iter().flatten().next())
}

/// A candidate of exactly this order and degree bound, if one survives the
/// held-out check.
pub fn fit_shape(
    terms: &[BigUint],
    order: usize,
    degree: usize,
    guard: usize,
) -> Option<RecurrenceCandidate> {
    let ints: Vec<BigInt> = terms.iter().cloned().map(BigInt::from).collect();
    fit(&ints, order, degree, guard)
}

fn fit(terms: &[BigInt], d: usize, e: usize, guard: usize) -> Option<RecurrenceCandidate> {
    let training = terms.len().checked_sub(guard)?;
    let unknowns = (d + 1) * (e + 1);
    let rows: Vec<Vec<BigInt>> = (1..=training.checked_sub(d)?)
        .map(|n| {
            let nn = BigInt::from(n);
            let mut row = Vec::with_capacity(unknowns);
            for j in 0..=d {
                let mut power = BigInt::one();
                for _ in 0..=e {
                    row.push(&power * &terms[n - 1 + j]);
                    power *= &nn;
                }
            }
            row
        })
        .collect();
    if rows.len() < unknowns {
        return None;
    }
    for v in kernel_basis(rows, unknowns) {
        let coefficients: Vec<Vec<BigInt>> = v.chunks(e + 1).map(<[BigInt]>::to_vec).collect();
        let Ok(rec) = RecurrenceCandidate::new(coefficients) else {
            continue;
        };
        let all_hold = (1..=terms.len() - d).all(|n| rec.residual(terms, n).is_zero());
        if all_hold {
            return Some(rec);
        }
    }
    None
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// Integer basis of the right kernel via fraction-free Gauss-Jordan
/// elimination. Rows are kept primitive to bound coefficient growth.
fn kernel_basis(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[i][c].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            let pivot_row = rows[r].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &fa - y * &fb;
            }
            primitive(&mut rows[i]);
        }
        primitive(&mut rows[r]);
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let lcm = pivots
        .iter()
        .fold(BigInt::one(), |l, &(row, c)| l.lcm(&rows[row][c]));
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![BigInt::zero(); cols];
            v[free] = lcm.clone();
            for &(row, c) in &pivots {
                v[c] = -(&lcm / &rows[row][c]) * &rows[row][free];
            }
            primitive(&mut v);
            v
        })
        .collect()
}
