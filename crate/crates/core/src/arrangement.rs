//! Hyperplanes, ambient spaces and the arrangement families.
//!
//! An [`Arrangement`] is the union of a Coxeter part (the reflecting
//! hyperplanes of `W`) and a `W`-stable part, kept as two labeled lists in a
//! fixed order: Coxeter part first, then stable part. Every position-indexed
//! structure in the crate (sign vectors, hyperplane actions) uses that order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{binomial, gcd_all, Rational};
use crate::group::SignedPerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("hyperplane normal is zero in the ambient space")]
    ZeroNormal,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("hyperplane {0} appears in both the Coxeter and the stable part")]
    Overlap(Hyperplane),
    #[error("hyperplane {0} is listed twice")]
    Duplicate(Hyperplane),
    #[error("generator {generator} maps {hyperplane} outside the stable part")]
    NotStable { generator: String, hyperplane: Hyperplane },
    #[error("{family} needs m >= {min}, got {m}")]
    MBelowMinimum { family: Family, m: usize, min: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("invalid arrangement document: {0}")]
    Document(String),
}

/// Coordinate space of an arrangement: all of `R^m`, or the zero-sum subspace `H_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSpace {
    pub m: usize,
    pub restricted: bool,
}

impl AmbientSpace {
    pub fn full(m: usize) -> Self {
        Self { m, restricted: false }
    }

    pub fn zero_sum(m: usize) -> Self {
        Self { m, restricted: true }
    }

    /// `m`, or `m - 1` on the zero-sum subspace.
    pub fn dimension(&self) -> usize {
        if self.restricted {
            self.m - 1
        } else {
            self.m
        }
    }

    /// Lifts reduced coordinates (the first `m - 1` on `H_0`) to a full point.
    pub fn lift(&self, reduced: Vec<Rational>) -> Vec<Rational> {
        assert_eq!(reduced.len(), self.dimension());
        let mut x = reduced;
        if self.restricted {
            let last: Rational = -x.iter().sum::<Rational>();
            x.push(last);
        }
        x
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.m && (!self.restricted || x.iter().sum::<Rational>().is_zero())
    }
}

/// The affine hyperplane `normal . x = offset`, stored in canonical form.
///
/// Canonical means: on `H_0` the normal has been reduced modulo the all-ones
/// vector (so its entries sum to zero); the entries of `(normal, offset)` are
/// coprime; the first nonzero normal entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
    offset: BigInt,
}

impl Hyperplane {
    /// Canonicalizes `normal . x = offset` in `ambient`.
    pub fn new(ambient: AmbientSpace, normal: Vec<BigInt>, offset: BigInt) -> Result<Self, ArrangementError> {
        Self::canonical_with_sign(ambient, normal, offset).map(|(h, _)| h)
    }

    pub fn from_i64(ambient: AmbientSpace, normal: &[i64], offset: i64) -> Result<Self, ArrangementError> {
        Self::new(
            ambient,
            normal.iter().map(|&v| BigInt::from(v)).collect(),
            BigInt::from(offset),
        )
    }

    /// Canonical form together with the sign relating it to the input:
    /// `true` when the canonical functional is a positive multiple of the input one on the ambient.
    pub fn canonical_with_sign(
        ambient: AmbientSpace,
        mut normal: Vec<BigInt>,
        mut offset: BigInt,
    ) -> Result<(Self, bool), ArrangementError> {
        if normal.len() != ambient.m {
            return Err(ArrangementError::Dimension {
                expected: ambient.m,
                got: normal.len(),
            });
        }
        if ambient.restricted {
            // a.x = (m a - (sum a) 1).x / m on H_0
            let m = BigInt::from(ambient.m);
            let total: BigInt = normal.iter().sum();
            for a in normal.iter_mut() {
                *a = &*a * &m - &total;
            }
            offset *= &m;
        }
        if normal.iter().all(Zero::is_zero) {
            return Err(ArrangementError::ZeroNormal);
        }
        let g = gcd_all(normal.iter().chain(std::iter::once(&offset)));
        let positive = normal.iter().find(|a| !a.is_zero()).is_some_and(|a| a.is_positive());
        let g = if positive { g } else { -g };
        for a in normal.iter_mut() {
            *a = a.div_floor(&g);
        }
        offset = offset.div_floor(&g);
        Ok((Self { normal, offset }, positive))
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn dimension(&self) -> usize {
        self.normal.len()
    }

    /// `normal . x - offset`.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        let dot: Rational = self
            .normal
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| v * Rational::from_integer(a.clone()))
            .sum();
        dot - Rational::from_integer(self.offset.clone())
    }

    /// Row `(a', c)` in reduced coordinates: on `H_0` the last coordinate is
    /// eliminated through `x_m = -(x_1 + ... + x_{m-1})`.
    pub fn reduced_row(&self, ambient: AmbientSpace) -> Vec<BigInt> {
        let mut row: Vec<BigInt> = if ambient.restricted {
            let last = &self.normal[ambient.m - 1];
            self.normal[..ambient.m - 1].iter().map(|a| a - last).collect()
        } else {
            self.normal.clone()
        };
        row.push(self.offset.clone());
        row
    }

    /// Image under a signed permutation, with `true` when the canonical normal is
    /// not reversed (so sign vectors carry over unchanged at this position).
    pub fn image(&self, ambient: AmbientSpace, w: &SignedPerm) -> (Hyperplane, bool) {
        Self::canonical_with_sign(ambient, w.apply(&self.normal), self.offset.clone())
            .expect("signed permutations preserve nonzero normals")
    }

    fn to_i64_row(&self) -> Option<Vec<i64>> {
        self.normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .map(ToPrimitive::to_i64)
            .collect()
    }
}

impl fmt::Display for Hyperplane {
    /// Renders as e.g. `x1 - x2 = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.normal.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let coef = if mag.is_one() { String::new() } else { mag.to_string() };
            match (first, a.is_negative()) {
                (true, false) => write!(f, "{coef}x{}", i + 1)?,
                (true, true) => write!(f, "-{coef}x{}", i + 1)?,
                (false, false) => write!(f, " + {coef}x{}", i + 1)?,
                (false, true) => write!(f, " - {coef}x{}", i + 1)?,
            }
            first = false;
        }
        write!(f, " = {}", self.offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupType {
    /// Symmetric group acting by permuting coordinates.
    A,
    /// Hyperoctahedral group: permutations and sign changes.
    B,
}

impl GroupType {
    pub fn order(&self, m: usize) -> BigInt {
        let f = crate::exactmath::factorial(m as u64);
        match self {
            GroupType::A => f,
            GroupType::B => f << m,
        }
    }

    /// Simple-reflection generators.
    pub fn generators(&self, m: usize) -> Vec<SignedPerm> {
        let mut gens: Vec<SignedPerm> = (0..m.saturating_sub(1))
            .map(|i| SignedPerm::transposition(m, i, i + 1))
            .collect();
        if *self == GroupType::B && m > 0 {
            gens.push(SignedPerm::sign_change(m, m - 1));
        }
        gens
    }
}

/// The arrangement families with built-in builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Catalan,
    RestrictedAllSubset,
    UnrestrictedAllSubset,
    MidHyperplane,
    SignedAllSubset,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Catalan,
        Family::RestrictedAllSubset,
        Family::UnrestrictedAllSubset,
        Family::MidHyperplane,
        Family::SignedAllSubset,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Catalan => "catalan",
            Family::RestrictedAllSubset => "restricted-all-subset",
            Family::UnrestrictedAllSubset => "unrestricted-all-subset",
            Family::MidHyperplane => "mid-hyperplane",
            Family::SignedAllSubset => "signed-all-subset",
        }
    }

    pub fn min_m(&self) -> usize {
        match self {
            Family::Catalan => 2,
            Family::RestrictedAllSubset => 3,
            Family::UnrestrictedAllSubset => 2,
            Family::MidHyperplane => 4,
            Family::SignedAllSubset => 3,
        }
    }

    pub fn group_type(&self) -> GroupType {
        match self {
            Family::SignedAllSubset => GroupType::B,
            _ => GroupType::A,
        }
    }

    pub fn ambient(&self, m: usize) -> AmbientSpace {
        match self {
            Family::Catalan | Family::RestrictedAllSubset | Family::MidHyperplane => AmbientSpace::zero_sum(m),
            Family::UnrestrictedAllSubset | Family::SignedAllSubset => AmbientSpace::full(m),
        }
    }

    pub fn build(&self, m: usize) -> Result<Arrangement, ArrangementError> {
        if m < self.min_m() {
            return Err(ArrangementError::MBelowMinimum {
                family: *self,
                m,
                min: self.min_m(),
            });
        }
        let ambient = self.ambient(m);
        let (coxeter, stable) = match self {
            Family::Catalan => (build_braid(m, ambient), build_semiorder(m)),
            Family::RestrictedAllSubset => (build_braid(m, ambient), build_restricted_all_subset(m)),
            Family::UnrestrictedAllSubset => (build_braid(m, ambient), build_unrestricted_all_subset(m)),
            Family::MidHyperplane => (build_braid(m, ambient), build_mid_hyperplane(m)),
            Family::SignedAllSubset => (build_coxeter_b(m), build_signed_all_subset(m)),
        };
        assemble(coxeter, stable, self.group_type(), ambient)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ArrangementError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ArrangementError::UnknownFamily(s.to_string()))
    }
}

fn plane(ambient: AmbientSpace, normal: &[i64], offset: i64) -> Hyperplane {
    Hyperplane::from_i64(ambient, normal, offset).expect("builder normals are nonzero")
}

fn dedup_in_order(planes: impl IntoIterator<Item = Hyperplane>) -> Vec<Hyperplane> {
    let mut seen = std::collections::HashSet::new();
    planes.into_iter().filter(|h| seen.insert(h.clone())).collect()
}

fn unit_difference(m: usize, i: usize, j: usize) -> Vec<i64> {
    let mut a = vec![0; m];
    a[i] = 1;
    a[j] = -1;
    a
}

/// Nonempty index subsets of `0..m` ordered by size, then lexicographically.
fn subsets_by_size(m: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<Vec<usize>> {
    fn combos(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            combos(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in sizes {
        combos(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Braid arrangement `x_i = x_j`, `i < j`.
pub fn build_braid(m: usize, ambient: AmbientSpace) -> Vec<Hyperplane> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push(plane(ambient, &unit_difference(m, i, j), 0));
        }
    }
    out
}

/// `x_i = x_j + 1` for ordered pairs `i != j`, on `H_0`.
pub fn build_semiorder(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::zero_sum(m);
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push(plane(ambient, &unit_difference(m, i, j), 1));
            out.push(plane(ambient, &unit_difference(m, i, j), -1));
        }
    }
    out
}

/// `sum_{i in I} x_i = 0` on `H_0` for nonempty proper `I`; `I` and its complement coincide.
pub fn build_restricted_all_subset(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::zero_sum(m);
    dedup_in_order(subsets_by_size(m, 1..=m - 1).into_iter().map(|s| {
        let mut a = vec![0; m];
        s.iter().for_each(|&i| a[i] = 1);
        plane(ambient, &a, 0)
    }))
}

/// `sum_{i in I} x_i = 0` in `R^m` for every nonempty `I`.
pub fn build_unrestricted_all_subset(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::full(m);
    subsets_by_size(m, 1..=m)
        .into_iter()
        .map(|s| {
            let mut a = vec![0; m];
            s.iter().for_each(|&i| a[i] = 1);
            plane(ambient, &a, 0)
        })
        .collect()
}

/// `x_i + x_j = x_k + x_l` over the three pairings of every 4-subset, on `H_0`.
pub fn build_mid_hyperplane(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::zero_sum(m);
    let mut out = Vec::new();
    for q in subsets_by_size(m, 4..=4) {
        let [a, b, c, d] = [q[0], q[1], q[2], q[3]];
        for (i, j, k, l) in [(a, b, c, d), (a, c, b, d), (a, d, b, c)] {
            let mut n = vec![0; m];
            n[i] = 1;
            n[j] = 1;
            n[k] = -1;
            n[l] = -1;
            out.push(plane(ambient, &n, 0));
        }
    }
    out
}

/// Type-B Coxeter arrangement: `x_i = 0`, then `x_i + x_j = 0`, `x_i - x_j = 0` for `i < j`.
pub fn build_coxeter_b(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::full(m);
    let mut out: Vec<Hyperplane> = (0..m)
        .map(|i| {
            let mut a = vec![0; m];
            a[i] = 1;
            plane(ambient, &a, 0)
        })
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            let mut sum = vec![0; m];
            sum[i] = 1;
            sum[j] = 1;
            out.push(plane(ambient, &sum, 0));
            out.push(plane(ambient, &unit_difference(m, i, j), 0));
        }
    }
    out
}

/// `sum eps_i x_i = 0` for `eps in {-1,0,1}^m` with at least three nonzero entries, up to `eps ~ -eps`.
pub fn build_signed_all_subset(m: usize) -> Vec<Hyperplane> {
    let ambient = AmbientSpace::full(m);
    let mut out = Vec::new();
    for support in subsets_by_size(m, 3..=m) {
        let k = support.len();
        for mask in 0..(1u64 << k) {
            let mut a = vec![0; m];
            for (bit, &i) in support.iter().enumerate() {
                a[i] = if mask >> bit & 1 == 1 { -1 } else { 1 };
            }
            out.push(plane(ambient, &a, 0));
        }
    }
    dedup_in_order(out)
}

/// `sum_{i=3}^m 2^(i-1) binom(m, i)`.
pub fn signed_all_subset_size(m: usize) -> BigInt {
    (3..=m).map(|i| binomial(m as u64, i as u64) << (i - 1)).sum()
}

/// `C = A ∪ B` with the Coxeter part first.
#[derive(Clone, Debug)]
pub struct Arrangement {
    ambient: AmbientSpace,
    group: GroupType,
    coxeter: Vec<Hyperplane>,
    stable: Vec<Hyperplane>,
    index: HashMap<Hyperplane, usize>,
}

/// Validates and joins a Coxeter part and a stable part.
pub fn assemble(
    coxeter: Vec<Hyperplane>,
    stable: Vec<Hyperplane>,
    group: GroupType,
    ambient: AmbientSpace,
) -> Result<Arrangement, ArrangementError> {
    let mut index = HashMap::new();
    let n_cox = coxeter.len();
    for (i, h) in coxeter.iter().chain(&stable).enumerate() {
        if h.dimension() != ambient.m {
            return Err(ArrangementError::Dimension {
                expected: ambient.m,
                got: h.dimension(),
            });
        }
        if let Some(&prev) = index.get(h) {
            return Err(if prev < n_cox && i >= n_cox {
                ArrangementError::Overlap(h.clone())
            } else {
                ArrangementError::Duplicate(h.clone())
            });
        }
        index.insert(h.clone(), i);
    }
    let arr = Arrangement {
        ambient,
        group,
        coxeter,
        stable,
        index,
    };
    for g in group.generators(ambient.m) {
        for h in &arr.stable {
            let (img, _) = h.image(ambient, &g);
            if !matches!(arr.index.get(&img), Some(&k) if k >= n_cox) {
                return Err(ArrangementError::NotStable {
                    generator: g.to_string(),
                    hyperplane: h.clone(),
                });
            }
        }
    }
    Ok(arr)
}

impl Arrangement {
    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }

    pub fn m(&self) -> usize {
        self.ambient.m
    }

    pub fn group_type(&self) -> GroupType {
        self.group
    }

    pub fn coxeter_part(&self) -> &[Hyperplane] {
        &self.coxeter
    }

    pub fn stable_part(&self) -> &[Hyperplane] {
        &self.stable
    }

    /// Number of hyperplanes in both parts.
    pub fn len(&self) -> usize {
        self.coxeter.len() + self.stable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        if i < self.coxeter.len() {
            &self.coxeter[i]
        } else {
            &self.stable[i - self.coxeter.len()]
        }
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = &Hyperplane> {
        self.coxeter.iter().chain(&self.stable)
    }

    pub fn position(&self, h: &Hyperplane) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn coxeter_range(&self) -> std::ops::Range<usize> {
        0..self.coxeter.len()
    }

    pub fn stable_range(&self) -> std::ops::Range<usize> {
        self.coxeter.len()..self.len()
    }

    /// Reduced rows `(a', c)` for every hyperplane, in arrangement order.
    pub fn reduced_rows(&self) -> Vec<Vec<BigInt>> {
        self.hyperplanes().map(|h| h.reduced_row(self.ambient)).collect()
    }

    /// Where `w` sends each hyperplane: `(target position, orientation kept)`.
    /// Fails if some image is not in the arrangement.
    pub fn hyperplane_action(&self, w: &SignedPerm) -> Option<Vec<(usize, bool)>> {
        self.hyperplanes()
            .map(|h| {
                let (img, kept) = h.image(self.ambient, w);
                self.position(&img).map(|k| (k, kept))
            })
            .collect()
    }

    pub fn to_document(&self) -> ArrangementDocument {
        let rows = |part: &[Hyperplane]| -> Vec<Vec<i64>> {
            part.iter()
                .map(|h| h.to_i64_row().expect("builder coefficients fit in i64"))
                .collect()
        };
        ArrangementDocument {
            m: self.ambient.m,
            restricted: self.ambient.restricted,
            group: self.group,
            coxeter: rows(&self.coxeter),
            stable: rows(&self.stable),
        }
    }

    pub fn from_document(doc: &ArrangementDocument) -> Result<Self, ArrangementError> {
        let ambient = AmbientSpace {
            m: doc.m,
            restricted: doc.restricted,
        };
        let parse = |rows: &[Vec<i64>]| -> Result<Vec<Hyperplane>, ArrangementError> {
            rows.iter()
                .map(|r| {
                    if r.len() != doc.m + 1 {
                        return Err(ArrangementError::Dimension {
                            expected: doc.m + 1,
                            got: r.len(),
                        });
                    }
                    Hyperplane::from_i64(ambient, &r[..doc.m], r[doc.m])
                })
                .collect()
        };
        assemble(parse(&doc.coxeter)?, parse(&doc.stable)?, doc.group, ambient)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ArrangementError> {
        let doc: ArrangementDocument =
            serde_json::from_str(s).map_err(|e| ArrangementError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Interchange form: `{"m":..,"restricted":..,"group":"A"|"B","A":[[a..,c]..],"B":[[a..,c]..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDocument {
    pub m: usize,
    pub restricted: bool,
    pub group: GroupType,
    #[serde(rename = "A")]
    pub coxeter: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    pub stable: Vec<Vec<i64>>,
}
