//! Exact slack-maximizing linear program used for chamber feasibility.
//!
//! Given oriented rows `g_i . x > h_i` in `dim` free variables, solve
//!
//! ```text
//!     max t   s.t.   g_i . x - h_i >= t  (all i),   t <= 1
//! ```
//!
//! The open region is nonempty iff the optimum `t*` is positive, and then the
//! optimal `x` is a strict interior witness. The solver works on the dual
//!
//! ```text
//!     min  sum_i (-h_i) y_i + y_0
//!     s.t. sum_i y_i g_i = 0,   sum_i y_i + y_0 = 1,   y >= 0
//! ```
//!
//! whose tableau has only `dim + 1` rows. Pivoting is fraction-free (every
//! stored entry is an integer minor of the starting tableau, the current basis
//! determinant is the common denominator) and uses Bland's rule. A checked
//! `i128` pass runs first; the `BigInt` pass is taken only if it overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactmath::Rational;

/// Optimum of the slack program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackOptimum {
    pub slack: Rational,
    pub point: Vec<Rational>,
}

impl SlackOptimum {
    pub fn is_feasible(&self) -> bool {
        self.slack.is_positive()
    }
}

#[derive(Debug)]
struct Overflow;

trait LpScalar: Clone {
    fn from_i64(v: i64) -> Self;
    /// `(a*b - c*d) / e`, exact.
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow>;
    /// Compares `a/b` with `c/d` for positive `b`, `d`.
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Ordering, Overflow>;
    fn signum_i8(&self) -> i8;
    fn negate(&self) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Result<Self, Overflow>;
}

impl LpScalar for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }

    #[inline]
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow> {
        let ab = a.checked_mul(*b).ok_or(Overflow)?;
        let cd = c.checked_mul(*d).ok_or(Overflow)?;
        let num = ab.checked_sub(cd).ok_or(Overflow)?;
        debug_assert_eq!(num % e, 0, "fraction-free pivot must divide exactly");
        Ok(num / e)
    }

    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Ordering, Overflow> {
        let ad = a.checked_mul(*d).ok_or(Overflow)?;
        let cb = c.checked_mul(*b).ok_or(Overflow)?;
        Ok(ad.cmp(&cb))
    }

    #[inline]
    fn signum_i8(&self) -> i8 {
        self.signum() as i8
    }

    fn negate(&self) -> Self {
        -self
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_bigint(v: &BigInt) -> Result<Self, Overflow> {
        v.to_i128().ok_or(Overflow)
    }
}

impl LpScalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow> {
        let num = a * b - c * d;
        let (q, r) = num.div_rem(e);
        debug_assert!(r.is_zero(), "fraction-free pivot must divide exactly");
        Ok(q)
    }

    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Ordering, Overflow> {
        Ok((a * d).cmp(&(c * b)))
    }

    fn signum_i8(&self) -> i8 {
        match self.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    fn negate(&self) -> Self {
        -self
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(v: &BigInt) -> Result<Self, Overflow> {
        Ok(v.clone())
    }
}

/// Rows in machine integers when every coefficient fits, for the fast pass.
#[derive(Clone, Debug)]
pub struct CompactRows {
    dim: usize,
    /// `dim + 1` entries per row: `g_1..g_dim, h`.
    data: Vec<i128>,
}

impl CompactRows {
    /// Returns `None` if some coefficient does not fit in 64 bits.
    pub fn from_rows(dim: usize, rows: &[Vec<BigInt>]) -> Option<Self> {
        let mut data = Vec::with_capacity(rows.len() * (dim + 1));
        for r in rows {
            assert_eq!(r.len(), dim + 1);
            for v in r {
                data.push(v.to_i64()? as i128);
            }
        }
        Some(Self { dim, data })
    }
}

/// Solves the slack program for rows `(g, h)` meaning `g . x > h`.
pub fn maximize_slack(dim: usize, rows: &[Vec<BigInt>]) -> SlackOptimum {
    if let Some(compact) = CompactRows::from_rows(dim, rows) {
        if let Ok(opt) = solve::<i128>(dim, rows.len(), |i, k| compact.data[i * (dim + 1) + k]) {
            return opt;
        }
    }
    solve::<BigInt>(dim, rows.len(), |i, k| rows[i][k].clone()).expect("bigint pass cannot overflow")
}

/// Solves the slack program over a subset of precomputed rows, each optionally negated.
///
/// `selection` lists `(row index, negate)`; a negated row `(g, h)` stands for `-g . x > -h`.
/// `fallback` supplies the same rows in arbitrary precision for the overflow path.
pub fn maximize_slack_selected(
    compact: Option<&CompactRows>,
    fallback: &[Vec<BigInt>],
    dim: usize,
    selection: &[(usize, bool)],
) -> SlackOptimum {
    if let Some(c) = compact {
        debug_assert_eq!(c.dim, dim);
        let w = dim + 1;
        if let Ok(opt) = solve::<i128>(dim, selection.len(), |i, k| {
            let (r, neg) = selection[i];
            let v = c.data[r * w + k];
            if neg {
                -v
            } else {
                v
            }
        }) {
            return opt;
        }
    }
    solve::<BigInt>(dim, selection.len(), |i, k| {
        let (r, neg) = selection[i];
        let v = &fallback[r][k];
        if neg {
            -v
        } else {
            v.clone()
        }
    })
    .expect("bigint pass cannot overflow")
}

struct Tableau<S> {
    /// constraint rows `0..=dim`, then the objective row
    rows: usize,
    /// `n` row columns, `y_0`, `dim` artificials, rhs
    cols: usize,
    data: Vec<S>,
    det: S,
    basis: Vec<usize>,
}

impl<S: LpScalar> Tableau<S> {
    #[inline]
    fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Result<(), Overflow> {
        let cols = self.cols;
        let p = self.at(pr, pc).clone();
        let pivot_row: Vec<S> = self.data[pr * cols..(pr + 1) * cols].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc).clone();
            let row = &mut self.data[r * cols..(r + 1) * cols];
            if f.signum_i8() == 0 {
                // (T_rj * p - 0) / det
                for v in row.iter_mut() {
                    if v.signum_i8() != 0 {
                        *v = S::mul_sub_div(v, &p, &f, &f, &self.det)?;
                    }
                }
            } else {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = S::mul_sub_div(v, &p, &f, pv, &self.det)?;
                }
            }
        }
        self.det = p;
        if self.det.signum_i8() < 0 {
            for v in self.data.iter_mut() {
                *v = v.negate();
            }
            self.det = self.det.negate();
        }
        self.basis[pr] = pc;
        Ok(())
    }
}

fn solve<S: LpScalar>(dim: usize, n: usize, coeff: impl Fn(usize, usize) -> S) -> Result<SlackOptimum, Overflow> {
    let y0 = n;
    let art = n + 1;
    let rhs = n + 1 + dim;
    let cols = rhs + 1;
    let rows = dim + 2;
    let obj = dim + 1;
    let zero = S::from_i64(0);
    let one = S::from_i64(1);
    let mut data = vec![zero.clone(); rows * cols];
    for i in 0..n {
        for k in 0..dim {
            data[k * cols + i] = coeff(i, k);
        }
        data[dim * cols + i] = one.clone();
        // reduced cost of y_i: -h_i - 1
        let h = coeff(i, dim).to_bigint();
        let rc = -h - 1;
        data[obj * cols + i] = S::from_bigint(&rc)?;
    }
    data[dim * cols + y0] = one.clone();
    for k in 0..dim {
        data[k * cols + art + k] = one.clone();
    }
    data[dim * cols + rhs] = one.clone();
    data[obj * cols + rhs] = S::from_i64(-1);
    let mut basis: Vec<usize> = (0..dim).map(|k| art + k).collect();
    basis.push(y0);
    let mut t = Tableau {
        rows,
        cols,
        data,
        det: one,
        basis,
    };

    // Drive the zero-level artificials out of the basis; rows where that is
    // impossible are redundant (the region has a lineality direction).
    for r in 0..dim {
        if t.basis[r] < art {
            continue;
        }
        if let Some(c) = (0..art).find(|&c| t.at(r, c).signum_i8() != 0) {
            t.pivot(r, c)?;
        }
    }

    while let Some(enter) = (0..art).find(|&c| t.at(obj, c).signum_i8() < 0) {
        let mut leave: Option<usize> = None;
        for r in 0..=dim {
            if t.at(r, enter).signum_i8() <= 0 {
                continue;
            }
            leave = Some(match leave {
                None => r,
                Some(best) => match S::cmp_ratio(t.at(r, rhs), t.at(r, enter), t.at(best, rhs), t.at(best, enter))? {
                    Ordering::Less => r,
                    Ordering::Equal if t.basis[r] < t.basis[best] => r,
                    _ => best,
                },
            });
        }
        // the primal is always feasible, so the dual cannot be unbounded
        let leave = leave.expect("slack program dual is bounded");
        t.pivot(leave, enter)?;
    }

    let det = t.det.to_bigint();
    let slack = Rational::new(-t.at(obj, rhs).to_bigint(), det.clone());
    let point = (0..dim)
        .map(|k| Rational::new(t.at(obj, art + k).to_bigint(), det.clone()))
        .collect();
    Ok(SlackOptimum { slack, point })
}
