//! Semiorders read off chambers of the Catalan arrangement, interval indices,
//! and the Stirling-number identities linking chamber counts.
//!
//! A point `x` determines the strict relation `i > j` iff `x_i > x_j + 1`;
//! chambers of the semiorder part correspond one-to-one with semiorders.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chambers::Chamber;
use crate::exactmath::{falling_product, stirling_first_unsigned, stirling_second, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiorderError {
    #[error("relation is not a strict partial order: {0}")]
    NotAPartialOrder(String),
    #[error("chamber does not satisfy x_1 > x_2 > ... > x_m")]
    WrongBaseChamber,
    #[error("element {0} is outside 1..={1}")]
    OutOfRange(usize, usize),
}

/// A strict relation on `1..=m` as a sorted set of pairs `(i, j)` meaning `i > j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Semiorder {
    pub m: usize,
    pub relation: BTreeSet<(usize, usize)>,
}

impl Semiorder {
    pub fn new(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, SemiorderError> {
        let relation: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(i, j) in &relation {
            for v in [i, j] {
                if v == 0 || v > m {
                    return Err(SemiorderError::OutOfRange(v, m));
                }
            }
        }
        Ok(Self { m, relation })
    }

    pub fn above(&self, i: usize, j: usize) -> bool {
        self.relation.contains(&(i, j))
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.above(i, j) || self.above(j, i)
    }

    /// Irreflexive and transitive (hence antisymmetric).
    pub fn validate_partial_order(&self) -> Result<(), SemiorderError> {
        for &(i, j) in &self.relation {
            if i == j {
                return Err(SemiorderError::NotAPartialOrder(format!("{i} > {i}")));
            }
            for &(k, l) in self.relation.range((j, 0)..(j + 1, 0)) {
                debug_assert_eq!(k, j);
                if !self.above(i, l) {
                    return Err(SemiorderError::NotAPartialOrder(format!(
                        "{i} > {j} > {l} but not {i} > {l}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = SemiorderDocument {
            m: self.m,
            relation: self.relation.iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&doc).expect("document serializes")
    }
}

impl fmt::Display for Semiorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relation.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self.relation.iter().map(|(i, j)| format!("{i}>{j}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// `{"m":..,"relation":[[i,j],..]}`.
#[derive(Serialize, Deserialize)]
struct SemiorderDocument {
    m: usize,
    relation: Vec<[usize; 2]>,
}

/// Reads `i > j iff x_i > x_j + 1` off a point.
pub fn semiorder_of_point(x: &[Rational]) -> Semiorder {
    let one = Rational::one();
    let m = x.len();
    let mut relation = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            if x[i] > &x[j] + &one {
                relation.insert((i + 1, j + 1));
            }
        }
    }
    Semiorder { m, relation }
}

/// The semiorder of a chamber, read from its witness.
pub fn semiorder_of_chamber(b: &Chamber) -> Semiorder {
    semiorder_of_point(&b.witness)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenPattern {
    /// `a > b`, `c > d`, every other pair incomparable.
    TwoPlusTwo,
    /// `a > b > c`, `d` incomparable to all three.
    ThreePlusOne,
}

/// Result of the forbidden-subposet test: `None` for a semiorder, otherwise a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub pattern: ForbiddenPattern,
    /// Elements in pattern order: `[a, b, c, d]` as in [`ForbiddenPattern`].
    pub elements: [usize; 4],
}

/// Checks for induced `2+2` and `3+1` subposets.
pub fn is_semiorder(poset: &Semiorder) -> Result<Option<Violation>, SemiorderError> {
    poset.validate_partial_order()?;
    let m = poset.m;
    let elems: Vec<usize> = (1..=m).collect();
    for &a in &elems {
        for &b in &elems {
            if !poset.above(a, b) {
                continue;
            }
            for &c in &elems {
                for &d in &elems {
                    if [c, d].iter().any(|v| *v == a || *v == b) || c == d {
                        continue;
                    }
                    let isolated_from_ab = [c, d]
                        .iter()
                        .all(|&v| !poset.comparable(v, a) && !poset.comparable(v, b));
                    if poset.above(c, d) && isolated_from_ab {
                        return Ok(Some(Violation {
                            pattern: ForbiddenPattern::TwoPlusTwo,
                            elements: [a, b, c, d],
                        }));
                    }
                    // a > b > c with d free
                    if poset.above(b, c)
                        && !poset.comparable(d, a)
                        && !poset.comparable(d, b)
                        && !poset.comparable(d, c)
                    {
                        return Ok(Some(Violation {
                            pattern: ForbiddenPattern::ThreePlusOne,
                            elements: [a, b, c, d],
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Maximal intervals `[i, j]` (1-based, `i < j`) with `x_i - x_j < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalIndex(pub Vec<(usize, usize)>);

impl fmt::Display for IntervalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, j)| format!("[{i},{j}]")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Interval index of a chamber inside `x_1 > x_2 > ... > x_m`.
pub fn interval_index(c: &Chamber) -> Result<IntervalIndex, SemiorderError> {
    let x = &c.witness;
    if x.windows(2).any(|w| w[0] <= w[1]) {
        return Err(SemiorderError::WrongBaseChamber);
    }
    let one = Rational::one();
    let m = x.len();
    let mut out = Vec::new();
    let mut last_end = 0;
    for i in 0..m {
        // furthest j with x_i - x_j < 1; decreasing coordinates make this a prefix
        let mut j = i;
        while j + 1 < m && &x[i] - &x[j + 1] < one {
            j += 1;
        }
        if j > i && j + 1 > last_end {
            out.push((i + 1, j + 1));
            last_end = j + 1;
        }
    }
    Ok(IntervalIndex(out))
}

/// `|Ch(B_m)| = sum_k (-1)^(m-k) S(m,k) |Ch(C_k)|` with `|Ch(C_k)| = (2k)(2k-1)...(k+2)`.
pub fn semiorder_count(m: usize) -> BigInt {
    (1..=m)
        .map(|k| {
            let term = stirling_second(m, k) * falling_product(k as u64);
            if (m - k) % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// Numbers of semiorders on `1..=n` elements.
pub fn semiorder_count_sequence(n: usize) -> Vec<BigInt> {
    (1..=n).map(semiorder_count).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingRow {
    pub m: usize,
    pub chambers_c: BigInt,
    pub chambers_b: BigInt,
    /// `sum_k c(m,k) |Ch(B_k)|`, which must equal `chambers_c`.
    pub convolution: BigInt,
}

impl StirlingRow {
    pub fn holds(&self) -> bool {
        self.convolution == self.chambers_c
    }
}

/// Evaluates both Stirling identities for `m = 1..=m_max`.
pub fn verify_stirling_convolution(m_max: usize) -> Vec<StirlingRow> {
    let b = semiorder_count_sequence(m_max);
    (1..=m_max)
        .map(|m| {
            let convolution = (1..=m).map(|k| stirling_first_unsigned(m, k) * &b[k - 1]).sum();
            StirlingRow {
                m,
                chambers_c: falling_product(m as u64),
                chambers_b: b[m - 1].clone(),
                convolution,
            }
        })
        .collect()
}

/// Independent oracle for `m <= 4`: every strict partial order on `1..=m`,
/// kept when no four elements induce `2+2` or `3+1`.
pub fn all_semiorders_brute_force(m: usize) -> BTreeSet<Semiorder> {
    assert!(m <= 4, "brute force is limited to m <= 4");
    let pairs: Vec<(usize, usize)> = (1..=m)
        .flat_map(|i| (1..=m).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let rel: BTreeSet<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let has = |i: usize, j: usize| rel.contains(&(i, j));
        let antisymmetric = rel.iter().all(|&(i, j)| !has(j, i));
        let transitive = rel.iter().all(|&(i, j)| (1..=m).all(|k| !has(j, k) || has(i, k)));
        if !antisymmetric || !transitive {
            continue;
        }
        let incomparable = |i: usize, j: usize| !has(i, j) && !has(j, i);
        let mut ok = true;
        'quads: for a in 1..=m {
            for b in 1..=m {
                for c in 1..=m {
                    for d in 1..=m {
                        let distinct = BTreeSet::from([a, b, c, d]).len() == 4;
                        if !distinct {
                            continue;
                        }
                        let two_two = has(a, b)
                            && has(c, d)
                            && incomparable(a, c)
                            && incomparable(a, d)
                            && incomparable(b, c)
                            && incomparable(b, d);
                        let three_one =
                            has(a, b) && has(b, c) && incomparable(d, a) && incomparable(d, b) && incomparable(d, c);
                        if two_two || three_one {
                            ok = false;
                            break 'quads;
                        }
                    }
                }
            }
        }
        if ok {
            out.insert(Semiorder { m, relation: rel });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;
    use crate::chambers::{chambers_of_stable_part, enumerate_chambers, fiber_a, SignVector};

    fn so(m: usize, pairs: &[(usize, usize)]) -> Semiorder {
        Semiorder::new(m, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn sequence() {
        let want = [1u64, 3, 19, 183, 2371, 38703, 763099];
        let got = semiorder_count_sequence(7);
        assert_eq!(got, want.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        assert_eq!(semiorder_count_sequence(2), vec![BigInt::from(1), BigInt::from(3)]);
    }

    #[test]
    fn stirling_identities() {
        let rows = verify_stirling_convolution(7);
        assert!(rows.iter().all(StirlingRow::holds));
        // 30 = 2*1 + 3*3 + 1*19
        assert_eq!(rows[2].chambers_c, BigInt::from(30));
        assert_eq!(rows[2].convolution, BigInt::from(2 + 3 * 3 + 19));
    }

    #[test]
    fn forbidden_patterns() {
        assert_eq!(is_semiorder(&so(3, &[(1, 2), (2, 3), (1, 3)])).unwrap(), None);
        let v = is_semiorder(&so(4, &[(1, 2), (3, 4)])).unwrap().unwrap();
        assert_eq!(v.pattern, ForbiddenPattern::TwoPlusTwo);
        let v = is_semiorder(&so(4, &[(1, 2), (2, 3), (1, 3)])).unwrap().unwrap();
        assert_eq!(v.pattern, ForbiddenPattern::ThreePlusOne);
        assert!(matches!(
            is_semiorder(&so(3, &[(1, 2), (2, 3)])),
            Err(SemiorderError::NotAPartialOrder(_))
        ));
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(all_semiorders_brute_force(3).len(), 19);
        assert_eq!(all_semiorders_brute_force(4).len(), 183);
        for s in all_semiorders_brute_force(4) {
            assert_eq!(is_semiorder(&s).unwrap(), None);
        }
    }

    #[test]
    fn catalan_three_semiorders_and_intervals() {
        let arr = Family::Catalan.build(3).unwrap();
        let ch = enumerate_chambers(&arr);
        let chb = chambers_of_stable_part(&ch, &arr);
        let found: BTreeSet<Semiorder> = chb.iter().map(semiorder_of_chamber).collect();
        assert_eq!(found, all_semiorders_brute_force(3));
        let a: SignVector = "+++".parse().unwrap();
        let idx: BTreeSet<String> = fiber_a(&ch, &arr, &a)
            .unwrap()
            .iter()
            .map(|c| interval_index(c).unwrap().to_string())
            .collect();
        let want: BTreeSet<String> = ["{[1,2]}", "{}", "{[2,3]}", "{[1,2], [2,3]}", "{[1,3]}"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(idx, want);
    }

    #[test]
    fn wrong_base_chamber() {
        let c = Chamber {
            signs: SignVector::all_positive(0),
            witness: vec![Rational::from_integer(0.into()); 2],
        };
        assert_eq!(interval_index(&c), Err(SemiorderError::WrongBaseChamber));
    }

    #[test]
    fn json_export() {
        assert_eq!(
            so(3, &[(1, 3), (2, 3)]).to_json(),
            r#"{"m":3,"relation":[[1,3],[2,3]]}"#
        );
    }
}
