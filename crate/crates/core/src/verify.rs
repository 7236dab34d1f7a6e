//! Property suites run against a full analysis of one arrangement.
//!
//! Each check is exact and reports a name, a verdict and a short detail line.
//! Checks that need work beyond the configured limits are reported as skipped
//! rather than silently dropped.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::Analysis;
use crate::arrangement::Family;
use crate::chambers::{brute_force_sign_vectors, chamber_of_point, enumerate_hyperplanes, SignVector};
use crate::charpoly::{
    characteristic_polynomial, essential_dimension, good_prime_threshold, grid_fits, interpolate_from_primes,
    primes_above, zaslavsky_count,
};
use crate::exactmath::catalan;
use crate::group::{point_stabilizer, stabilizer_from_average, GroupType, Part};
use crate::reference::lookup;
use crate::semiorder::{interval_index, is_semiorder, semiorder_count, semiorder_of_chamber};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            verdict: Verdict::Skipped,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random `(w, c)` pairs for the equivariance check.
    pub samples: usize,
    /// Largest hyperplane count handed to the brute-force sign-vector oracle.
    pub oracle_max_hyperplanes: usize,
    /// Grid budget for each finite-field point count (`p^l` of the largest prime).
    pub grid_budget: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 64,
            oracle_max_hyperplanes: 16,
            grid_budget: 2e8,
        }
    }
}

/// Runs every suite; `family` enables the family-specific checks.
pub fn run_all(an: &Analysis, family: Option<Family>, opts: &VerifyOptions) -> Vec<Check> {
    let mut out = vec![
        simple_transitivity_on_coxeter(an),
        free_action_on_whole(an),
        fiber_uniformity(an),
        orbit_bijection(an),
        fiber_transitivity(an),
        orbit_stabilizer(an),
        equivariance(an, opts),
        fix_identity(an),
        invariant_points(an),
        young_subgroups(an),
        oracle_whole(an, opts),
        oracle_coxeter(an),
    ];
    out.extend(finite_field(an, opts));
    if let Some(f) = family {
        out.extend(family_checks(an, f));
    }
    out
}

fn simple_transitivity_on_coxeter(an: &Analysis) -> Check {
    let name = "simple-transitivity-on-A";
    let order = an.group().order();
    let a0 = &an.chambers_a[an.fundamental].signs;
    let images: HashSet<SignVector> = (0..order).map(|i| an.ctx.act(i, a0, Part::Coxeter)).collect();
    let all: HashSet<SignVector> = an.chambers_a.iter().map(|c| c.signs.clone()).collect();
    let ok = an.chambers_a.len() == order && images == all;
    Check::new(
        name,
        ok,
        format!(
            "|Ch(A)|={} |W|={} distinct images of a0={}",
            an.chambers_a.len(),
            order,
            images.len()
        ),
    )
}

fn free_action_on_whole(an: &Analysis) -> Check {
    let order = an.group().order();
    let ok = an.orbits_c.sizes.iter().all(|&s| s == order);
    Check::new(
        "free-action-on-C",
        ok,
        format!("{} orbits, all of size {}", an.orbits_c.count(), order),
    )
}

fn fiber_uniformity(an: &Analysis) -> Check {
    let sizes = an.coxeter_fiber_sizes();
    let expected = an.chambers_c.len() / an.group().order();
    let ok = an.chambers_c.len().is_multiple_of(an.group().order()) && sizes.iter().all(|&s| s == expected);
    Check::new(
        "fiber-uniformity",
        ok,
        format!("|phi_A^-1(a)|={expected} for all {} chambers of A", sizes.len()),
    )
}

fn orbit_bijection(an: &Analysis) -> Check {
    let reps: BTreeSet<usize> = an
        .orbits
        .iter()
        .map(|o| an.orbits_b.membership[o.stable_chamber])
        .collect();
    let ok = an.orbits_c.count() == an.orbits_b.count()
        && an.orbits.len() == an.orbits_c.count()
        && reps.len() == an.orbits.len();
    Check::new(
        "orbit-bijection",
        ok,
        format!(
            "orbits on Ch(C)={} orbits on Ch(B)={}",
            an.orbits_c.count(),
            an.orbits_b.count()
        ),
    )
}

/// The stabilizer of each `b` permutes the fiber over `b` simply transitively.
fn fiber_transitivity(an: &Analysis) -> Check {
    let arr = an.arrangement();
    let stable = arr.stable_range();
    let mut fibers: HashMap<SignVector, Vec<SignVector>> = HashMap::new();
    for c in &an.chambers_c {
        fibers
            .entry(c.signs.slice(stable.clone()))
            .or_default()
            .push(c.signs.clone());
    }
    let elements = an.group().elements();
    let index_of: HashMap<_, usize> = elements.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let bad = an
        .chambers_b
        .par_iter()
        .filter(|b| {
            let stab = an.ctx.stabilizer(&b.signs, Part::Stable);
            let fiber = &fibers[&b.signs];
            let first = &fiber[0];
            let images: HashSet<SignVector> = stab
                .elements()
                .iter()
                .map(|w| an.ctx.act(index_of[w], first, Part::Whole))
                .collect();
            let fiber_set: HashSet<SignVector> = fiber.iter().cloned().collect();
            !(images.len() == stab.order() && images == fiber_set)
        })
        .count();
    Check::new(
        "fiber-transitivity",
        bad == 0,
        format!("{} of {} fibers over Ch(B) fail", bad, an.chambers_b.len()),
    )
}

fn orbit_stabilizer(an: &Analysis) -> Check {
    let order = an.group().order();
    let fibers = an.stable_fiber_sizes();
    let bad = (0..an.chambers_b.len())
        .into_par_iter()
        .filter(|&i| {
            let stab = an.ctx.stabilizer(&an.chambers_b[i].signs, Part::Stable).order();
            let size = an.orbits_b.sizes[an.orbits_b.membership[i]];
            size * stab != order || fibers[i] != stab
        })
        .count();
    Check::new(
        "orbit-stabilizer",
        bad == 0,
        format!(
            "|O(b)|*|W_b|=|W| and |phi_B^-1(b)|=|W_b|: {} of {} chambers of B fail",
            bad,
            an.chambers_b.len()
        ),
    )
}

/// Acting on a witness point and reading off its chamber agrees with the combinatorial action,
/// and the action commutes with both restriction maps.
fn equivariance(an: &Analysis, opts: &VerifyOptions) -> Check {
    let arr = an.arrangement();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let c_set: HashSet<&SignVector> = an.chambers_c.iter().map(|c| &c.signs).collect();
    let mut bad = 0;
    for _ in 0..opts.samples {
        let i = rng.gen_range(0..an.group().order());
        let c = &an.chambers_c[rng.gen_range(0..an.chambers_c.len())];
        let w = &an.group().elements()[i];
        let image = an.ctx.act(i, &c.signs, Part::Whole);
        let geometric = chamber_of_point(arr, &w.apply(&c.witness)).map(|ch| ch.signs);
        let via_a = an.ctx.act(i, &c.signs.slice(arr.coxeter_range()), Part::Coxeter);
        let via_b = an.ctx.act(i, &c.signs.slice(arr.stable_range()), Part::Stable);
        let ok = c_set.contains(&image)
            && geometric.as_ref() == Ok(&image)
            && image.slice(arr.coxeter_range()) == via_a
            && image.slice(arr.stable_range()) == via_b;
        if !ok {
            bad += 1;
        }
    }
    Check::new(
        "equivariance",
        bad == 0,
        format!("{bad} of {} random samples fail (seed {})", opts.samples, opts.seed),
    )
}

fn fix_identity(an: &Analysis) -> Check {
    let report = an.ctx.verify_fix_identity(&an.chambers_b, an.chambers_c.len());
    Check::new(
        "fix-identity",
        report.holds(),
        format!("sum of Fix(w) over Ch(B)={} |Ch(C)|={}", report.total, report.expected),
    )
}

/// The average point lies in `b` and its stabilizer is exactly `W_b`.
fn invariant_points(an: &Analysis) -> Check {
    let arr = an.arrangement();
    let bad = an
        .orbits
        .iter()
        .filter(|o| {
            let b = &an.chambers_b[o.stable_chamber].signs;
            let inside = arr.stable_range().enumerate().all(|(k, h)| {
                let v = arr.hyperplane(h).evaluate(&o.invariant_point);
                if b.is_positive(k) {
                    v.is_positive()
                } else {
                    v.is_negative()
                }
            });
            !(inside && point_stabilizer(an.group(), &o.invariant_point) == o.stabilizer)
        })
        .count();
    Check::new(
        "invariant-point",
        bad == 0,
        format!("{bad} of {} orbit representatives fail", an.orbits.len()),
    )
}

fn young_subgroups(an: &Analysis) -> Check {
    let name = "young-subgroup";
    if an.group().kind() != GroupType::A {
        return Check::skipped(name, "type B group");
    }
    let bad = an
        .orbits
        .iter()
        .filter(|o| stabilizer_from_average(GroupType::A, &o.invariant_point).as_ref() != Ok(&o.stabilizer))
        .count();
    Check::new(
        name,
        bad == 0,
        format!(
            "{bad} of {} stabilizers differ from the Young subgroup",
            an.orbits.len()
        ),
    )
}

fn oracle_whole(an: &Analysis, opts: &VerifyOptions) -> Check {
    let name = "oracle-C";
    let arr = an.arrangement();
    if arr.len() > opts.oracle_max_hyperplanes {
        return Check::skipped(
            name,
            format!(
                "{} hyperplanes exceed the oracle limit {}",
                arr.len(),
                opts.oracle_max_hyperplanes
            ),
        );
    }
    let planes: Vec<_> = arr.hyperplanes().cloned().collect();
    let brute = brute_force_sign_vectors(arr.ambient(), &planes);
    let listed: Vec<SignVector> = an.chambers_c.iter().map(|c| c.signs.clone()).collect();
    Check::new(
        name,
        brute == listed,
        format!("oracle {} enumeration {}", brute.len(), listed.len()),
    )
}

/// The braid or type B Coxeter arrangement of the same rank against the oracle, for `m <= 5`.
fn oracle_coxeter(an: &Analysis) -> Check {
    let name = "oracle-A";
    let arr = an.arrangement();
    if arr.m() > 5 {
        return Check::skipped(name, "m > 5");
    }
    let planes = arr.coxeter_part().to_vec();
    let brute = brute_force_sign_vectors(arr.ambient(), &planes);
    let listed: Vec<SignVector> = enumerate_hyperplanes(arr.ambient(), &planes)
        .into_iter()
        .map(|c| c.signs)
        .collect();
    Check::new(
        name,
        brute == listed && listed == an.chambers_a.iter().map(|c| c.signs.clone()).collect::<Vec<_>>(),
        format!("oracle {} enumeration {}", brute.len(), listed.len()),
    )
}

fn finite_field(an: &Analysis, opts: &VerifyOptions) -> Vec<Check> {
    let arr = an.arrangement();
    let within = grid_fits(arr, opts.grid_budget);
    if !within {
        let why = "grid beyond budget";
        return vec![
            Check::skipped("zaslavsky", why),
            Check::skipped("prime-independence", why),
        ];
    }
    let chi = match characteristic_polynomial(arr) {
        Ok(c) => c,
        Err(e) => {
            return vec![
                Check::new("zaslavsky", false, e.to_string()),
                Check::skipped("prime-independence", "no chi"),
            ]
        }
    };
    let count = zaslavsky_count(&chi.chi);
    let zaslavsky = Check::new(
        "zaslavsky",
        count == BigInt::from(an.chambers_c.len()),
        format!(
            "chi={} gives {} chambers, enumeration {}",
            chi.chi,
            count,
            an.chambers_c.len()
        ),
    );
    let dim = essential_dimension(arr);
    let independence = match good_prime_threshold(arr) {
        Ok(t) => {
            let first = primes_above(t, dim + 1);
            let second = primes_above(*first.last().expect("nonempty"), dim + 1);
            let largest = *second.last().expect("nonempty") as f64;
            if largest.powi(dim as i32) > opts.grid_budget {
                Check::skipped("prime-independence", "second prime set beyond budget")
            } else {
                match (
                    interpolate_from_primes(arr, &first),
                    interpolate_from_primes(arr, &second),
                ) {
                    (Ok(x), Ok(y)) => Check::new(
                        "prime-independence",
                        x == y && x == chi.chi,
                        format!("primes {first:?} and {second:?}"),
                    ),
                    (Err(e), _) | (_, Err(e)) => Check::new("prime-independence", false, e.to_string()),
                }
            }
        }
        Err(e) => Check::new("prime-independence", false, e.to_string()),
    };
    vec![zaslavsky, independence]
}

/// Published per-orbit stabilizer orders, `|Ch(B)|` and reference rows.
fn family_checks(an: &Analysis, family: Family) -> Vec<Check> {
    let m = an.arrangement().m();
    let mut out = Vec::new();
    let mut orders: Vec<usize> = an.orbits.iter().map(|o| o.stabilizer.order()).collect();
    orders.sort();
    let published: Option<(&[usize], usize)> = match (family, m) {
        (Family::Catalan, 3) => Some((&[1, 1, 2, 2, 6], 19)),
        (Family::UnrestrictedAllSubset, 3) => Some((&[1, 1, 2, 2, 2, 2, 2, 2, 6, 6], 32)),
        (Family::MidHyperplane, 4) => Some((&[6, 6], 8)),
        (Family::SignedAllSubset, 3) => Some((&[6, 8], 14)),
        _ => None,
    };
    if let Some((expected, chb)) = published {
        out.push(Check::new(
            "published-stabilizers",
            orders == expected && an.chambers_b.len() == chb,
            format!("stabilizer orders {orders:?}, |Ch(B)|={}", an.chambers_b.len()),
        ));
    }
    if let Some(entry) = lookup(family, m) {
        out.push(Check::new(
            "reference-count",
            entry.chambers() == BigInt::from(an.chambers_c.len()) && zaslavsky_count(&entry.chi()) == entry.chambers(),
            format!(
                "published {} chambers, enumerated {}",
                entry.chambers,
                an.chambers_c.len()
            ),
        ));
    }
    if family == Family::Catalan {
        out.push(semiorder_bijection(an));
        out.push(interval_indices(an));
    }
    out
}

fn semiorder_bijection(an: &Analysis) -> Check {
    let m = an.arrangement().m();
    let mut seen = HashSet::new();
    let mut bad = 0;
    for b in &an.chambers_b {
        let s = semiorder_of_chamber(b);
        if !matches!(is_semiorder(&s), Ok(None)) || !seen.insert(s) {
            bad += 1;
        }
    }
    let ok = bad == 0 && BigInt::from(seen.len()) == semiorder_count(m);
    Check::new(
        "semiorder-bijection",
        ok,
        format!("{} distinct semiorders, {} rejected", seen.len(), bad),
    )
}

fn interval_indices(an: &Analysis) -> Check {
    let m = an.arrangement().m();
    let indices: Result<HashSet<_>, _> = an
        .orbits
        .iter()
        .map(|o| interval_index(&an.chambers_c[o.chamber]))
        .collect();
    match indices {
        Ok(set) => Check::new(
            "interval-index",
            set.len() == an.orbits.len() && BigInt::from(set.len()) == catalan(m as u64),
            format!("{} distinct interval sets over a0", set.len()),
        ),
        Err(e) => Check::new("interval-index", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_three_all_pass() {
        let arr = Family::Catalan.build(3).unwrap();
        let an = Analysis::new(&arr).unwrap();
        let checks = run_all(&an, Some(Family::Catalan), &VerifyOptions::default());
        for c in &checks {
            assert!(!c.failed(), "{}: {}", c.name, c.detail);
        }
        assert!(checks
            .iter()
            .any(|c| c.name == "published-stabilizers" && c.verdict == Verdict::Pass));
    }

    #[test]
    fn type_b_family_passes() {
        let arr = Family::SignedAllSubset.build(3).unwrap();
        let an = Analysis::new(&arr).unwrap();
        let checks = run_all(&an, Some(Family::SignedAllSubset), &VerifyOptions::default());
        for c in &checks {
            assert!(!c.failed(), "{}: {}", c.name, c.detail);
        }
    }
}
