//! Chamber enumeration by incremental insertion, with exact interior witnesses.
//!
//! A chamber is stored as a sign vector over the arrangement's hyperplanes
//! (`+` when `a . x > c`) and a rational point strictly inside it. Hyperplanes
//! are inserted one at a time; each existing chamber either stays on one side
//! or splits. The side containing the current witness is known for free, so
//! only the opposite side needs a feasibility program.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{AmbientSpace, Arrangement, Hyperplane};
use crate::exactmath::{format_rational, parse_rational, Rational};
use crate::lp::{maximize_slack_selected, CompactRows};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChamberError {
    #[error("point lies on hyperplane #{index} ({hyperplane})")]
    OnHyperplane { index: usize, hyperplane: Hyperplane },
    #[error("point is not in the ambient space")]
    NotInAmbient,
    #[error("sign vector {0} is not realized by any chamber")]
    InvalidSubSign(String),
    #[error("sign vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("invalid chamber document: {0}")]
    Document(String),
}

/// Packed vector of signs; bit set means `-`.
///
/// Bits are stored most-significant first so the derived ordering is the
/// lexicographic order of the strings with `+` before `-`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    words: Vec<u64>,
    len: usize,
}

impl SignVector {
    pub fn all_positive(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(negative: impl IntoIterator<Item = bool>) -> Self {
        let mut v = Self::all_positive(0);
        for b in negative {
            v.push(b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True for `+`.
    pub fn is_positive(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 0
    }

    /// `+1` or `-1`.
    pub fn sign(&self, i: usize) -> i8 {
        if self.is_positive(i) {
            1
        } else {
            -1
        }
    }

    pub fn set(&mut self, i: usize, negative: bool) {
        assert!(i < self.len);
        let bit = 1u64 << (63 - i % 64);
        if negative {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn push(&mut self, negative: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, negative);
    }

    pub fn slice(&self, range: Range<usize>) -> SignVector {
        SignVector::from_bools(range.map(|i| !self.is_positive(i)))
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len).map(|i| self.sign(i))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.is_positive(i) { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl std::str::FromStr for SignVector {
    type Err = ChamberError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(false),
                '-' => Ok(true),
                _ => Err(ChamberError::Document(format!("bad sign character {c:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignVector::from_bools)
    }
}

/// A chamber: its sign vector and a point strictly inside it (full `m` coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub signs: SignVector,
    pub witness: Vec<Rational>,
}

impl Chamber {
    /// Restriction of the sign vector to `range`; the witness still lies inside.
    pub fn restrict(&self, range: Range<usize>) -> Chamber {
        Chamber {
            signs: self.signs.slice(range),
            witness: self.witness.clone(),
        }
    }
}

/// Sign of `a . x - c`.
fn side(h: &Hyperplane, x: &[Rational]) -> i8 {
    let v = h.evaluate(x);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// The chamber containing `x`, with `x` itself as witness.
pub fn chamber_of_point(arr: &Arrangement, x: &[Rational]) -> Result<Chamber, ChamberError> {
    if !arr.ambient().contains(x) {
        return Err(ChamberError::NotInAmbient);
    }
    let mut signs = SignVector::all_positive(0);
    for (index, h) in arr.hyperplanes().enumerate() {
        match side(h, x) {
            0 => {
                return Err(ChamberError::OnHyperplane {
                    index,
                    hyperplane: h.clone(),
                })
            }
            s => signs.push(s < 0),
        }
    }
    Ok(Chamber {
        signs,
        witness: x.to_vec(),
    })
}

/// Integer witness in reduced coordinates: the point is `num / den`.
#[derive(Clone)]
struct Scaled {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scaled {
    fn from_rationals(y: &[Rational]) -> Self {
        let den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let num = y.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        Self { num, den }
    }

    fn origin(dim: usize) -> Self {
        Self {
            num: vec![BigInt::zero(); dim],
            den: BigInt::one(),
        }
    }

    /// Sign of `g . y - h` for row `(g, h)`.
    fn side(&self, row: &[BigInt]) -> i8 {
        let dim = self.num.len();
        let mut acc = -(&row[dim] * &self.den);
        for (g, v) in row[..dim].iter().zip(&self.num) {
            if !g.is_zero() {
                acc += g * v;
            }
        }
        match acc.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }

    fn to_rationals(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|v| Rational::new(v.clone(), self.den.clone()))
            .collect()
    }
}

struct Partial {
    signs: SignVector,
    witness: Scaled,
}

/// Enumerates the chambers cut out by `rows` (`(g, h)` in `dim` reduced coordinates),
/// returning sign vectors and reduced witnesses sorted by sign vector.
pub fn enumerate_rows(dim: usize, rows: &[Vec<BigInt>]) -> Vec<(SignVector, Vec<Rational>)> {
    let compact = CompactRows::from_rows(dim, rows);
    let mut current = vec![Partial {
        signs: SignVector::all_positive(0),
        witness: Scaled::origin(dim),
    }];
    for k in 0..rows.len() {
        current = current
            .into_par_iter()
            .flat_map_iter(|p| split(p, k, dim, rows, compact.as_ref()))
            .collect();
    }
    let mut out: Vec<(SignVector, Vec<Rational>)> = current
        .into_iter()
        .map(|p| (p.signs, p.witness.to_rationals()))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn split(p: Partial, k: usize, dim: usize, rows: &[Vec<BigInt>], compact: Option<&CompactRows>) -> Vec<Partial> {
    let probe = |negative: bool| -> Option<Scaled> {
        let mut selection: Vec<(usize, bool)> = (0..k).map(|i| (i, !p.signs.is_positive(i))).collect();
        selection.push((k, negative));
        let opt = maximize_slack_selected(compact, rows, dim, &selection);
        opt.is_feasible().then(|| Scaled::from_rationals(&opt.point))
    };
    let here = p.witness.side(&rows[k]);
    let (plus, minus) = match here {
        1 => (Some(p.witness.clone()), probe(true)),
        -1 => (probe(false), Some(p.witness.clone())),
        _ => (probe(false), probe(true)),
    };
    let mut out = Vec::with_capacity(2);
    for (negative, w) in [(false, plus), (true, minus)] {
        if let Some(witness) = w {
            let mut signs = p.signs.clone();
            signs.push(negative);
            out.push(Partial { signs, witness });
        }
    }
    out
}

/// All chambers of the arrangement, sorted by sign vector.
pub fn enumerate_chambers(arr: &Arrangement) -> Vec<Chamber> {
    enumerate_hyperplanes(arr.ambient(), &arr.hyperplanes().cloned().collect::<Vec<_>>())
}

/// Chambers of an arbitrary list of hyperplanes in `ambient`.
pub fn enumerate_hyperplanes(ambient: AmbientSpace, planes: &[Hyperplane]) -> Vec<Chamber> {
    let rows: Vec<Vec<BigInt>> = planes.iter().map(|h| h.reduced_row(ambient)).collect();
    enumerate_rows(ambient.dimension(), &rows)
        .into_iter()
        .map(|(signs, y)| Chamber {
            signs,
            witness: ambient.lift(y),
        })
        .collect()
}

/// Distinct restrictions of `chambers` to `range`, sorted, each with a witness from some source chamber.
pub fn restrict_all(chambers: &[Chamber], range: Range<usize>) -> Vec<Chamber> {
    let mut out: Vec<Chamber> = chambers.iter().map(|c| c.restrict(range.clone())).collect();
    out.sort_by(|a, b| a.signs.cmp(&b.signs));
    out.dedup_by(|a, b| a.signs == b.signs);
    out
}

/// `Ch(A)`: chambers of the Coxeter part, from a chamber list of the whole arrangement.
pub fn chambers_of_coxeter_part(chambers_c: &[Chamber], arr: &Arrangement) -> Vec<Chamber> {
    restrict_all(chambers_c, arr.coxeter_range())
}

/// `Ch(B)`: chambers of the stable part, from a chamber list of the whole arrangement.
pub fn chambers_of_stable_part(chambers_c: &[Chamber], arr: &Arrangement) -> Vec<Chamber> {
    restrict_all(chambers_c, arr.stable_range())
}

fn fiber(chambers_c: &[Chamber], range: Range<usize>, sub: &SignVector) -> Result<Vec<Chamber>, ChamberError> {
    if sub.len() != range.len() {
        return Err(ChamberError::Length {
            expected: range.len(),
            got: sub.len(),
        });
    }
    let out: Vec<Chamber> = chambers_c
        .iter()
        .filter(|c| {
            range
                .clone()
                .enumerate()
                .all(|(j, i)| c.signs.is_positive(i) == sub.is_positive(j))
        })
        .cloned()
        .collect();
    if out.is_empty() {
        return Err(ChamberError::InvalidSubSign(sub.to_string()));
    }
    Ok(out)
}

/// Chambers of the whole arrangement lying in the Coxeter chamber `a`.
pub fn fiber_a(chambers_c: &[Chamber], arr: &Arrangement, a: &SignVector) -> Result<Vec<Chamber>, ChamberError> {
    fiber(chambers_c, arr.coxeter_range(), a)
}

/// Chambers of the whole arrangement lying in the stable-part chamber `b`.
pub fn fiber_b(chambers_c: &[Chamber], arr: &Arrangement, b: &SignVector) -> Result<Vec<Chamber>, ChamberError> {
    fiber(chambers_c, arr.stable_range(), b)
}

#[derive(Serialize, Deserialize)]
struct ChamberRecord {
    signs: String,
    witness: Vec<String>,
}

/// `[{"signs":"++-...","witness":["3/4","0","-3/4"]}, ...]`.
pub fn chambers_to_json(chambers: &[Chamber]) -> String {
    let records: Vec<ChamberRecord> = chambers
        .iter()
        .map(|c| ChamberRecord {
            signs: c.signs.to_string(),
            witness: c.witness.iter().map(format_rational).collect(),
        })
        .collect();
    serde_json::to_string(&records).expect("records serialize")
}

pub fn chambers_from_json(s: &str) -> Result<Vec<Chamber>, ChamberError> {
    let records: Vec<ChamberRecord> = serde_json::from_str(s).map_err(|e| ChamberError::Document(e.to_string()))?;
    records
        .into_iter()
        .map(|r| {
            let witness = r
                .witness
                .iter()
                .map(|w| parse_rational(w).map_err(|e| ChamberError::Document(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Chamber {
                signs: r.signs.parse()?,
                witness,
            })
        })
        .collect()
}

/// Independent oracle: tries every sign vector (pruning infeasible prefixes) and
/// decides feasibility of the strict system by Fourier-Motzkin elimination.
pub fn brute_force_sign_vectors(ambient: AmbientSpace, planes: &[Hyperplane]) -> Vec<SignVector> {
    let dim = ambient.dimension();
    // homogenize g . y > h as (g, -h) . (y, s) > 0 together with s > 0
    let rows: Vec<Vec<BigInt>> = planes
        .iter()
        .map(|h| {
            let mut r = h.reduced_row(ambient);
            r[dim] = -&r[dim];
            r
        })
        .collect();
    let mut scale = vec![BigInt::zero(); dim + 1];
    scale[dim] = BigInt::one();
    let mut out = Vec::new();
    let mut chosen = vec![scale];
    descend(&rows, &mut chosen, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn descend(rows: &[Vec<BigInt>], chosen: &mut Vec<Vec<BigInt>>, signs: &mut Vec<bool>, out: &mut Vec<SignVector>) {
    if !strict_system_feasible(chosen.clone()) {
        return;
    }
    if signs.len() == rows.len() {
        out.push(SignVector::from_bools(signs.iter().copied()));
        return;
    }
    let row = &rows[signs.len()];
    for negative in [false, true] {
        let r: Vec<BigInt> = if negative {
            row.iter().map(|v| -v).collect()
        } else {
            row.clone()
        };
        chosen.push(r);
        signs.push(negative);
        descend(rows, chosen, signs, out);
        signs.pop();
        chosen.pop();
    }
}

fn normalize(mut r: Vec<BigInt>) -> Vec<BigInt> {
    let g = r.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in r.iter_mut() {
            *v = &*v / &g;
        }
    }
    r
}

/// Is `{ v : r . v > 0 for every r }` nonempty? Exact Fourier-Motzkin elimination.
pub fn strict_system_feasible(rows: Vec<Vec<BigInt>>) -> bool {
    let mut rows: Vec<Vec<BigInt>> = rows.into_iter().map(normalize).collect();
    let n = rows.first().map_or(0, Vec::len);
    for k in 0..n {
        rows.sort();
        rows.dedup();
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r[k].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r[k].is_negative());
        rows = zero;
        for p in &pos {
            for q in &neg {
                let a = -&q[k];
                let b = &p[k];
                let combo: Vec<BigInt> = p.iter().zip(q).map(|(x, y)| &a * x + b * y).collect();
                rows.push(normalize(combo));
            }
        }
    }
    // every remaining row is identically zero, i.e. reads 0 > 0
    rows.is_empty()
}
