//! Exact Gaussian elimination over ℚ.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with optional sign. Returns `None` for anything
/// else, including a zero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let int = |s: &str| -> Option<BigInt> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    let n = int(num)?;
    let d = match den {
        Some(d) => int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn check_widths(rows: &[Vec<Rational>], width: usize) -> Result<()> {
    match rows.iter().find(|r| r.len() != width) {
        Some(r) => Err(Error::Input(alloc::format!(
            "dimension mismatch: row of length {} where {width} was expected",
            r.len()
        ))),
        None => Ok(()),
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    check_widths(rows, first.len())?;
    let mut m = rows.to_vec();
    Ok(rref(&mut m, first.len()).len())
}

/// Coefficients `l` with `l · rows = target`, if any. When `rows` are
/// linearly dependent the solution with free coefficients set to zero is
/// returned.
pub fn solve_coords(rows: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    check_widths(rows, target.len())?;
    let k = rows.len();
    // One equation per column: Σ_i l_i rows[i][j] = target[j].
    let mut m: Vec<Vec<Rational>> = (0..target.len())
        .map(|j| {
            let mut eq: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
            eq.push(target[j].clone());
            eq
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut l = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        l[c] = m[i][k].clone();
    }
    Ok(Some(l))
}

pub fn in_span(rows: &[Vec<Rational>], target: &[Rational]) -> Result<bool> {
    Ok(solve_coords(rows, target)?.is_some())
}

/// Incrementally maintained basis of a row space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanBasis {
    /// Reduced rows, each with its pivot column normalized to 1 and zero
    /// at the pivots of earlier rows.
    reduced: Vec<(usize, Vec<Rational>)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.reduced {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        self.reduced.push((p, r));
        true
    }
}
