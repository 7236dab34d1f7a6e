//! Characteristic polynomials by point counting over prime fields.
//!
//! For a prime `p` above the good-prime threshold, `chi(p)` is the number of
//! points of `F_p^l` (in reduced coordinates) lying on no hyperplane. The
//! counts at `l + 1` primes determine `chi`; one more prime validates it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::exactmath::{gcd_all, lagrange_interpolate, next_prime_above, ExactError, IntegerPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharpolyError {
    #[error("prime {prime} does not exceed the good-prime threshold {threshold}")]
    BadPrime { prime: u64, threshold: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large for machine-word counting")]
    PrimeTooLarge(u64),
    #[error("coefficients do not fit in machine words")]
    CoefficientOverflow,
    #[error("interpolation failed: {0}")]
    Interpolation(#[from] ExactError),
    #[error("characteristic polynomial could not be validated: {0}")]
    ValidationFailed(String),
    #[error("{chambers} chambers is not divisible by the group order {order}")]
    NonIntegral { chambers: BigInt, order: BigInt },
}

/// Number of points of `F_p^l` avoiding every hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCountSample {
    pub prime: u64,
    pub count: BigInt,
}

/// `m`, or `m - 1` on the zero-sum subspace.
pub fn essential_dimension(arr: &Arrangement) -> usize {
    arr.ambient().dimension()
}

/// Reduced rows `(a', c)` divided by their content.
pub fn primitive_rows(arr: &Arrangement) -> Vec<Vec<BigInt>> {
    arr.reduced_rows()
        .into_iter()
        .map(|r| {
            let g = gcd_all(r.iter());
            r.into_iter().map(|v| v / &g).collect()
        })
        .collect()
}

/// Largest absolute value of any square minor of the primitive `(a' | c)` matrix, at least 1.
///
/// Any prime above it divides no nonzero minor, so ranks of every subfamily
/// (with and without offsets) survive reduction mod `p`.
pub fn good_prime_threshold(arr: &Arrangement) -> Result<u64, CharpolyError> {
    max_abs_minor(&primitive_rows(arr))
}

/// Largest `|det|` over all square submatrices of `rows`, and at least 1.
pub fn max_abs_minor(rows: &[Vec<BigInt>]) -> Result<u64, CharpolyError> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Ok(1);
    };
    let live: Vec<usize> = (0..width).filter(|&j| rows.iter().any(|r| !r[j].is_zero())).collect();
    let matrix: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            live.iter()
                .map(|&j| r[j].to_i64().ok_or(CharpolyError::CoefficientOverflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let mut best: u64 = 1;
    for k in 1..=live.len().min(matrix.len()) {
        let col_sets = combinations(live.len(), k);
        let row_sets = combinations(matrix.len(), k);
        let local = row_sets
            .par_iter()
            .map(|rs| {
                let mut best = 0u64;
                let mut buf = vec![0i128; k * k];
                for cs in &col_sets {
                    for (a, &r) in rs.iter().enumerate() {
                        for (b, &c) in cs.iter().enumerate() {
                            buf[a * k + b] = matrix[r][c] as i128;
                        }
                    }
                    best = best.max(bareiss_abs_det(&mut buf, k));
                }
                best
            })
            .max()
            .unwrap_or(0);
        best = best.max(local);
    }
    Ok(best)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Fraction-free elimination; every intermediate is a minor, so small inputs stay small.
fn bareiss_abs_det(a: &mut [i128], k: usize) -> u64 {
    let mut prev: i128 = 1;
    let mut sign = 1i128;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| a[r * k + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in 0..k {
                a.swap(piv * k + j, c * k + j);
            }
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                a[r * k + j] = (a[r * k + j] * a[c * k + c] - a[r * k + c] * a[c * k + j]) / prev;
            }
        }
        prev = a[c * k + c];
    }
    (sign * a[k * k - 1]).unsigned_abs() as u64
}

/// Counts points of `F_p^l` off every hyperplane.
pub fn count_points_mod_p(arr: &Arrangement, p: u64) -> Result<PointCountSample, CharpolyError> {
    let threshold = good_prime_threshold(arr)?;
    if p <= threshold {
        return Err(CharpolyError::BadPrime { prime: p, threshold });
    }
    count_points_rows(essential_dimension(arr), &primitive_rows(arr), p)
}

/// Counts `y in F_p^dim` with `g . y != h` for every row `(g, h)`; no threshold check.
///
/// The first `dim - 1` coordinates are scanned with incremental row sums; the
/// last coordinate is solved for, each row excluding at most one value.
pub fn count_points_rows(dim: usize, rows: &[Vec<BigInt>], p: u64) -> Result<PointCountSample, CharpolyError> {
    if !crate::exactmath::is_prime(p) {
        return Err(CharpolyError::NotPrime(p));
    }
    if p + 2 > 64 * MAX_WORDS as u64 {
        return Err(CharpolyError::PrimeTooLarge(p));
    }
    if dim == 0 {
        let alive = rows.iter().all(|r| !r[0].is_zero());
        return Ok(PointCountSample {
            prime: p,
            count: BigInt::from(alive as u64),
        });
    }
    let kernel = Kernel::new(dim, rows, p as usize);
    let count: u64 = match (p as usize + 2).div_ceil(64) {
        1 => kernel.count::<1>(),
        2 => kernel.count::<2>(),
        3..=4 => kernel.count::<4>(),
        5..=8 => kernel.count::<8>(),
        9..=16 => kernel.count::<16>(),
        17..=32 => kernel.count::<32>(),
        _ => kernel.count::<MAX_WORDS>(),
    };
    Ok(PointCountSample {
        prime: p,
        count: BigInt::from(count),
    })
}

const MAX_WORDS: usize = 64;

struct Kernel {
    p: usize,
    n: usize,
    /// `steps[k][r]`: coefficient of prefix coordinate `k` in row `r`, mod `p`.
    steps: Vec<Vec<u32>>,
    /// `table[r * p + s]`: the last-coordinate value row `r` excludes when its prefix sum is `s`;
    /// `p` when it excludes every value, `p + 1` when it excludes none.
    table: Vec<u16>,
}

impl Kernel {
    fn new(dim: usize, rows: &[Vec<BigInt>], p: usize) -> Self {
        let pb = BigInt::from(p);
        let reduce = |v: &BigInt| -> usize { v.mod_floor(&pb).to_usize().expect("residue fits") };
        let n = rows.len();
        let last = dim - 1;
        let steps = (0..last)
            .map(|k| rows.iter().map(|r| reduce(&r[k]) as u32).collect())
            .collect();
        let mut table = vec![0u16; n * p];
        for (i, r) in rows.iter().enumerate() {
            let a = reduce(&r[last]);
            let c = reduce(&r[dim]);
            let inv = (a != 0).then(|| mod_pow(a as u64, p as u64 - 2, p as u64) as usize);
            for s in 0..p {
                let gap = (c + p - s) % p;
                table[i * p + s] = match inv {
                    Some(inv) => (gap * inv % p) as u16,
                    None if gap == 0 => p as u16,
                    None => (p + 1) as u16,
                };
            }
        }
        Self { p, n, steps, table }
    }

    fn count<const N: usize>(&self) -> u64 {
        if self.steps.is_empty() {
            return self.count_with_prefix::<N>(&[]);
        }
        (0..self.p)
            .into_par_iter()
            .map(|first| self.count_with_prefix::<N>(&[first]))
            .sum()
    }

    /// Points whose leading coordinates are `fixed`, summed over the remaining ones.
    fn count_with_prefix<const N: usize>(&self, fixed: &[usize]) -> u64 {
        let (p, n) = (self.p, self.n);
        let free = self.steps.len() - fixed.len();
        let mut sums: Vec<usize> = (0..n)
            .map(|r| {
                fixed
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (k, &v)| (acc + self.steps[k][r] as usize * v) % p)
            })
            .collect();
        let mut live = [0u64; N];
        for v in 0..p {
            live[v / 64] |= 1 << (v % 64);
        }
        let mut odometer = vec![0usize; free];
        let mut total = 0u64;
        loop {
            let mut mask = [0u64; N];
            for (r, &s) in sums.iter().enumerate() {
                let v = self.table[r * p + s] as usize;
                mask[v / 64] |= 1 << (v % 64);
            }
            if mask[p / 64] >> (p % 64) & 1 == 0 {
                let excluded: u32 = mask.iter().zip(&live).map(|(a, b)| (a & b).count_ones()).sum();
                total += (p as u32 - excluded) as u64;
            }
            let mut k = 0;
            loop {
                if k == free {
                    return total;
                }
                let step = &self.steps[fixed.len() + k];
                for (s, &d) in sums.iter_mut().zip(step) {
                    *s += d as usize;
                    if *s >= p {
                        *s -= p;
                    }
                }
                odometer[k] += 1;
                if odometer[k] < p {
                    break;
                }
                // p steps brought every sum back to its starting value
                odometer[k] = 0;
                k += 1;
            }
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// The `count` smallest primes above `threshold`.
pub fn primes_above(threshold: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = threshold;
    for _ in 0..count {
        p = next_prime_above(p);
        out.push(p);
    }
    out
}

/// Interpolates `chi` from point counts at the given primes (all assumed good).
pub fn interpolate_from_primes(arr: &Arrangement, primes: &[u64]) -> Result<IntegerPolynomial, CharpolyError> {
    let dim = essential_dimension(arr);
    let rows = primitive_rows(arr);
    let nodes = primes
        .iter()
        .map(|&p| count_points_rows(dim, &rows, p).map(|s| (BigInt::from(p), s.count)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lagrange_interpolate(&nodes)?)
}

/// Determinant evaluations the exhaustive threshold scan may spend before giving up.
pub const MINOR_SCAN_LIMIT: f64 = 1e9;

/// Number of square submatrices the threshold scan visits: `sum_k C(rows, k) C(live columns, k)`.
pub fn minor_scan_cost(rows: &[Vec<BigInt>]) -> f64 {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0.0;
    };
    let live = (0..width).filter(|&j| rows.iter().any(|r| !r[j].is_zero())).count();
    (1..=live.min(rows.len()))
        .map(|k| binomial_f64(rows.len(), k) * binomial_f64(live, k))
        .sum()
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Grid points in the largest point count the default prime schedule needs: `p^l`.
///
/// Infinite when the threshold scan itself would exceed [`MINOR_SCAN_LIMIT`].
pub fn grid_estimate(arr: &Arrangement) -> Result<f64, CharpolyError> {
    let dim = essential_dimension(arr);
    let rows = primitive_rows(arr);
    if minor_scan_cost(&rows) > MINOR_SCAN_LIMIT {
        return Ok(f64::INFINITY);
    }
    let largest = *primes_above(max_abs_minor(&rows)?, dim + 2).last().expect("nonempty");
    Ok((largest as f64).powi(dim as i32))
}

/// Whether the point counts fit `budget` grid points, trying a cheap lower bound
/// (the threshold is at least the largest entry) before the exhaustive scan.
pub fn grid_fits(arr: &Arrangement, budget: f64) -> bool {
    let dim = essential_dimension(arr);
    let largest_entry = primitive_rows(arr)
        .iter()
        .flatten()
        .map(|v| v.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(1);
    let lower = (*primes_above(largest_entry, dim + 2).last().expect("nonempty") as f64).powi(dim as i32);
    lower <= budget && matches!(grid_estimate(arr), Ok(g) if g <= budget)
}

/// `chi` with the primes used (interpolation nodes first, the validation prime last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPolynomial {
    pub chi: IntegerPolynomial,
    pub primes_used: Vec<u64>,
    pub threshold: u64,
}

/// How many times to move to larger primes after a failed validation.
const RETRIES: usize = 3;

pub fn characteristic_polynomial(arr: &Arrangement) -> Result<CharacteristicPolynomial, CharpolyError> {
    let dim = essential_dimension(arr);
    let threshold = good_prime_threshold(arr)?;
    let rows = primitive_rows(arr);
    let mut floor = threshold;
    let mut last_problem = String::new();
    for _ in 0..=RETRIES {
        let primes = primes_above(floor, dim + 2);
        let samples = primes
            .iter()
            .map(|&p| count_points_rows(dim, &rows, p))
            .collect::<Result<Vec<_>, _>>()?;
        let (nodes, held_out) = samples.split_at(dim + 1);
        let nodes: Vec<(BigInt, BigInt)> = nodes.iter().map(|s| (BigInt::from(s.prime), s.count.clone())).collect();
        floor = *primes.last().expect("nonempty");
        let chi = match lagrange_interpolate(&nodes) {
            Ok(chi) => chi,
            Err(e) => {
                last_problem = e.to_string();
                continue;
            }
        };
        let check = &held_out[0];
        if chi.degree() != Some(dim) || !chi.is_monic() {
            last_problem = format!("interpolant {chi} is not monic of degree {dim}");
        } else if chi.eval(&BigInt::from(check.prime)) != check.count {
            last_problem = format!("held-out prime {} disagrees", check.prime);
        } else {
            return Ok(CharacteristicPolynomial {
                chi,
                primes_used: primes,
                threshold,
            });
        }
    }
    Err(CharpolyError::ValidationFailed(last_problem))
}

/// `(-1)^l chi(-1)`, the number of chambers.
pub fn zaslavsky_count(chi: &IntegerPolynomial) -> BigInt {
    let v = chi.eval_i64(-1);
    match chi.degree() {
        Some(l) if l % 2 == 1 => -v,
        _ => v,
    }
}

/// Chamber count divided by the group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    pub chambers: BigInt,
    pub orbits: BigInt,
    /// `orbits - 1`, reported for the restricted all-subset family.
    pub ranking_patterns: Option<BigInt>,
}

pub fn orbit_count(chambers: &BigInt, group_order: &BigInt, ranking: bool) -> Result<OrbitCount, CharpolyError> {
    let (q, r) = chambers.div_rem(group_order);
    if !r.is_zero() || !q.is_positive() {
        return Err(CharpolyError::NonIntegral {
            chambers: chambers.clone(),
            order: group_order.clone(),
        });
    }
    Ok(OrbitCount {
        chambers: chambers.clone(),
        ranking_patterns: ranking.then(|| &q - 1),
        orbits: q,
    })
}

/// Orbit count of a built family from its characteristic polynomial.
pub fn orbit_count_of(arr: &Arrangement, chi: &IntegerPolynomial, ranking: bool) -> Result<OrbitCount, CharpolyError> {
    orbit_count(&zaslavsky_count(chi), &arr.group_type().order(arr.m()), ranking)
}

/// `{"family","m","chi":[c_0..c_l],"chambers","orbits","primes_used"}`.
#[derive(Clone, Debug, Serialize)]
pub struct CharpolyReport {
    pub family: String,
    pub m: usize,
    pub chi: Vec<serde_json::Number>,
    pub chambers: serde_json::Number,
    pub orbits: serde_json::Number,
    pub primes_used: Vec<u64>,
}

/// Arbitrary-precision integers as JSON numbers, without a float detour.
pub fn json_integer(v: &BigInt) -> serde_json::Number {
    v.to_string().parse().expect("integer literal is a JSON number")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{assemble, build_braid, AmbientSpace, Family, GroupType, Hyperplane};

    fn brute_count(dim: usize, rows: &[Vec<BigInt>], p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut count = 0;
        let total = p.pow(dim as u32);
        for code in 0..total {
            let y: Vec<BigInt> = (0..dim).map(|k| BigInt::from(code / p.pow(k as u32) % p)).collect();
            let off = rows.iter().all(|r| {
                let v: BigInt = r[..dim].iter().zip(&y).map(|(a, b)| a * b).sum::<BigInt>() - &r[dim];
                !v.mod_floor(&pb).is_zero()
            });
            count += off as u64;
        }
        count
    }

    #[test]
    fn oversized_threshold_scan_is_refused() {
        let arr = crate::arrangement::Family::RestrictedAllSubset.build(9).unwrap();
        assert!(minor_scan_cost(&primitive_rows(&arr)) > MINOR_SCAN_LIMIT);
        assert_eq!(grid_estimate(&arr).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kernel_matches_brute_force() {
        for (f, m) in [
            (Family::Catalan, 3),
            (Family::RestrictedAllSubset, 4),
            (Family::SignedAllSubset, 3),
        ] {
            let arr = f.build(m).unwrap();
            let rows = primitive_rows(&arr);
            let dim = essential_dimension(&arr);
            for p in [11u64, 13, 17] {
                let fast = count_points_rows(dim, &rows, p).unwrap().count;
                assert_eq!(fast, BigInt::from(brute_count(dim, &rows, p)), "{f} p={p}");
            }
        }
    }

    #[test]
    fn braid_three_at_seven() {
        let z = AmbientSpace::zero_sum(3);
        let arr = assemble(build_braid(3, z), vec![], GroupType::A, z).unwrap();
        assert_eq!(count_points_mod_p(&arr, 7).unwrap().count, BigInt::from(30));
    }

    #[test]
    fn empty_arrangement() {
        let amb = AmbientSpace::full(2);
        let arr = assemble(vec![], vec![], GroupType::A, amb).unwrap();
        assert_eq!(count_points_mod_p(&arr, 5).unwrap().count, BigInt::from(25));
        assert_eq!(good_prime_threshold(&arr).unwrap(), 1);
        let chi = characteristic_polynomial(&arr).unwrap().chi;
        assert_eq!(chi, IntegerPolynomial::monomial(2));
        assert_eq!(zaslavsky_count(&chi), BigInt::from(1));
    }

    #[test]
    fn single_plane_threshold() {
        let amb = AmbientSpace::full(2);
        let h = Hyperplane::from_i64(amb, &[1, 0], 0).unwrap();
        let arr = assemble(vec![h], vec![], GroupType::A, amb).unwrap();
        assert_eq!(good_prime_threshold(&arr).unwrap(), 1);
    }

    #[test]
    fn bad_prime_rejected() {
        let arr = Family::Catalan.build(3).unwrap();
        let t = good_prime_threshold(&arr).unwrap();
        assert!(matches!(
            count_points_mod_p(&arr, 2),
            Err(CharpolyError::BadPrime { .. })
        ));
        // reduced coordinates give rows such as (2, 1 | 1), whose minors reach 9
        assert_eq!(t, 9);
        assert!(matches!(
            count_points_mod_p(&arr, 7),
            Err(CharpolyError::BadPrime { .. })
        ));
        assert_eq!(
            count_points_mod_p(&arr, 11).unwrap().count,
            BigInt::from((11 - 4) * (11 - 5))
        );
    }

    #[test]
    fn minors() {
        let r = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(max_abs_minor(&[r(&[1, 1]), r(&[1, -1])]).unwrap(), 2);
        assert_eq!(max_abs_minor(&[r(&[3, 0])]).unwrap(), 3);
        assert_eq!(combinations(4, 2).len(), 6);
        let mut a = [2i128, 1, 1, 1, 3, 2, 1, 0, 0];
        assert_eq!(bareiss_abs_det(&mut a, 3), 1);
    }

    #[test]
    fn restricted_four() {
        let arr = Family::RestrictedAllSubset.build(4).unwrap();
        let res = characteristic_polynomial(&arr).unwrap();
        assert_eq!(res.chi, IntegerPolynomial::from_roots(&[1, 5, 7]));
        assert_eq!(
            count_points_rows(3, &primitive_rows(&arr), 11).unwrap().count,
            BigInt::from(240)
        );
        assert_eq!(zaslavsky_count(&res.chi), BigInt::from(96));
        let oc = orbit_count_of(&arr, &res.chi, true).unwrap();
        assert_eq!(oc.orbits, BigInt::from(4));
        assert_eq!(oc.ranking_patterns, Some(BigInt::from(3)));
    }

    #[test]
    fn zaslavsky_values() {
        assert_eq!(
            zaslavsky_count(&IntegerPolynomial::from_roots(&[1, 5])),
            BigInt::from(12)
        );
        assert_eq!(
            zaslavsky_count(&IntegerPolynomial::from_roots(&[1, 5, 7])),
            BigInt::from(96)
        );
    }

    #[test]
    fn non_integral_orbits() {
        assert!(orbit_count(&BigInt::from(7), &BigInt::from(6), false).is_err());
    }
}
