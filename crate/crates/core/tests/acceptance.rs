//! End-to-end acceptance run: one line per criterion, `criterion N: PASS|FAIL <detail>`.
//!
//! Expected values are compared exactly. This target runs without the libtest
//! harness: criteria run sequentially, so wall-clock limits are measured without
//! competing test threads, and the lines are printed even when output is captured.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use chamber_orbits::analysis::{Analysis, OrbitRecord};
use chamber_orbits::arrangement::{build_braid, AmbientSpace, Family};
use chamber_orbits::chambers::{brute_force_sign_vectors, chamber_of_point, enumerate_hyperplanes};
use chamber_orbits::charpoly::{characteristic_polynomial, orbit_count, zaslavsky_count};
use chamber_orbits::exactmath::{catalan, factorial, rational_int, IntegerPolynomial, Rational};
use chamber_orbits::group::{stabilizer_from_average, GroupType};
use chamber_orbits::reference::{catalan_chi, lookup, REFERENCE};
use chamber_orbits::report::young_label;
use chamber_orbits::semiorder::{
    all_semiorders_brute_force, interval_index, semiorder_count_sequence, semiorder_of_chamber,
    verify_stirling_convolution, Semiorder,
};
use chamber_orbits::verify::{run_all, Verdict, VerifyOptions};

type Outcome = Result<String, String>;

/// Fails the criterion with a message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn point(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rational_int(x)).collect()
}

fn linear(roots: &[i64]) -> IntegerPolynomial {
    IntegerPolynomial::from_roots(roots)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("{what} took {spent:?}, limit {limit:?}"));
    }
    Ok(())
}

/// The orbit record whose representative chamber of `C` contains `x`.
fn record_at<'a>(an: &'a Analysis, x: &[i64]) -> Result<&'a OrbitRecord, String> {
    let c = chamber_of_point(an.arrangement(), &point(x)).map_err(|e| format!("point {x:?}: {e}"))?;
    an.orbits
        .iter()
        .find(|o| an.chambers_c[o.chamber].signs == c.signs)
        .ok_or_else(|| format!("point {x:?} is not in the fundamental chamber"))
}

/// Chambers, polynomial and orbit count from the finite-field method alone.
fn finite_field(family: Family, m: usize) -> Result<(IntegerPolynomial, BigInt, BigInt), String> {
    let arr = family.build(m).map_err(|e| e.to_string())?;
    let chi = characteristic_polynomial(&arr).map_err(|e| e.to_string())?.chi;
    let chambers = zaslavsky_count(&chi);
    let oc = orbit_count(&chambers, &arr.group_type().order(m), false).map_err(|e| e.to_string())?;
    Ok((chi, chambers, oc.orbits))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let arr = Family::Catalan.build(3).map_err(|e| e.to_string())?;
    let an = Analysis::new(&arr).map_err(|e| e.to_string())?;
    ensure!(an.chambers_c.len() == 30, "|Ch(C)| = {}", an.chambers_c.len());
    ensure!(an.chambers_b.len() == 19, "|Ch(B)| = {}", an.chambers_b.len());
    ensure!(
        an.orbits_c.count() == 5 && an.orbits_b.count() == 5,
        "orbit counts {} {}",
        an.orbits_c.count(),
        an.orbits_b.count()
    );

    // c_1..c_5 by their maximal intervals, then the expected data for b_i = phi_B(c_i).
    let intervals = ["{[1,2]}", "{}", "{[2,3]}", "{[1,2], [2,3]}", "{[1,3]}"];
    let sizes = [3, 6, 3, 6, 1];
    let fibers = [2, 1, 2, 1, 6];
    let groups = ["S{1,2}", "{1}", "S{2,3}", "{1}", "S{1,2,3}"];
    let semiorders: [&[(usize, usize)]; 5] = [
        &[(1, 3), (2, 3)],
        &[(1, 2), (2, 3), (1, 3)],
        &[(1, 2), (1, 3)],
        &[(1, 3)],
        &[],
    ];
    let mut labeled_index = BTreeMap::new();
    for (k, o) in an.orbits.iter().enumerate() {
        let label = interval_index(&an.chambers_c[o.chamber])
            .map_err(|e| e.to_string())?
            .to_string();
        let i = intervals
            .iter()
            .position(|s| *s == label)
            .ok_or(format!("unexpected interval set {label}"))?;
        ensure!(labeled_index.insert(k, i).is_none(), "duplicate");
        ensure!(o.size == sizes[i], "|O(b{})| = {}", i + 1, o.size);
        ensure!(o.fiber_size == fibers[i], "fiber of b{} = {}", i + 1, o.fiber_size);
        ensure!(
            o.stabilizer.order() == fibers[i],
            "|W_b{}| = {}",
            i + 1,
            o.stabilizer.order()
        );
        let young = young_label(&o.invariant_point);
        ensure!(young == groups[i], "W_b{} = {young}", i + 1);
        ensure!(
            stabilizer_from_average(GroupType::A, &o.invariant_point).as_ref() == Ok(&o.stabilizer),
            "Young subgroup of z differs from W_b{}",
            i + 1
        );
        let expected = Semiorder::new(3, semiorders[i].iter().copied()).map_err(|e| e.to_string())?;
        let got = semiorder_of_chamber(&an.chambers_b[o.stable_chamber]);
        ensure!(got == expected, "semiorder of b{} is {got}", i + 1);
    }
    let classes: BTreeSet<BTreeSet<usize>> = an
        .tau_classes
        .iter()
        .map(|c| c.orbits.iter().map(|k| labeled_index[k] + 1).collect())
        .collect();
    let expected: BTreeSet<BTreeSet<usize>> = [vec![2, 4], vec![1, 3], vec![5]]
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
    ensure!(classes == expected, "tau preimages {classes:?}");
    within(start, Duration::from_secs(1), "catalan m=3")?;
    Ok(format!(
        "30 chambers, 19 in B, 5 orbits, per-orbit data and tau preimages match in {:?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for m in [4usize, 5] {
        let arr = Family::Catalan.build(m).map_err(|e| e.to_string())?;
        let expected = factorial(m as u64) * catalan(m as u64);
        let enumerated = chamber_orbits::chambers::enumerate_chambers(&arr);
        ensure!(
            BigInt::from(enumerated.len()) == expected,
            "m={m}: enumeration {}",
            enumerated.len()
        );
        let chi = characteristic_polynomial(&arr).map_err(|e| e.to_string())?.chi;
        let roots: Vec<i64> = (m as i64 + 1..=2 * m as i64 - 1).collect();
        ensure!(chi == linear(&roots) && chi == catalan_chi(m), "m={m}: chi = {chi}");
        ensure!(
            zaslavsky_count(&chi) == expected,
            "m={m}: Zaslavsky {}",
            zaslavsky_count(&chi)
        );
        if m == 4 {
            let an = Analysis::from_chambers(&arr, enumerated).map_err(|e| e.to_string())?;
            let fix = an.ctx.verify_fix_identity(&an.chambers_b, an.chambers_c.len());
            ensure!(
                fix.per_element.len() == 24 && fix.holds(),
                "Fix sum {} vs {}",
                fix.total,
                fix.expected
            );
            notes.push(format!("Fix sum {} over 24 elements", fix.total));
        }
        notes.push(format!("m={m}: {expected} chambers, chi={chi}"));
    }
    within(start, Duration::from_secs(30), "catalan m=4,5")?;
    Ok(format!("{} in {:?}", notes.join("; "), start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let family = Family::RestrictedAllSubset;
    let expected_rows: [(usize, &[i64], u64, u64); 4] = [
        (3, &[1, 5], 12, 2),
        (4, &[1, 5, 7], 96, 4),
        (5, &[1, 7, 8, 9], 1440, 12),
        (6, &[1, 7, 11, 13, 14], 40320, 56),
    ];
    for (m, roots, chambers, orbits) in expected_rows {
        let (chi, count, orb) = finite_field(family, m)?;
        ensure!(chi == linear(roots), "m={m}: chi = {chi}");
        ensure!(
            count == BigInt::from(chambers) && orb == BigInt::from(orbits),
            "m={m}: {count} chambers, {orb} orbits"
        );
        let ranking = orbit_count(&count, &factorial(m as u64), true).map_err(|e| e.to_string())?;
        ensure!(
            ranking.ranking_patterns == Some(BigInt::from(orbits - 1)),
            "m={m}: ranking patterns"
        );
        if m <= 5 {
            let an = Analysis::new(&family.build(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure!(
                an.chambers_c.len() as u64 == chambers,
                "m={m}: enumeration {}",
                an.chambers_c.len()
            );
            ensure!(
                an.orbits.len() as u64 == orbits,
                "m={m}: enumerated orbits {}",
                an.orbits.len()
            );
            if m == 4 {
                let b1 = record_at(&an, &[3, 2, 1, -6])?;
                let b2 = record_at(&an, &[3, 2, -1, -4])?;
                ensure!(
                    b1.stabilizer.order() == 6 && b1.fiber_size == 6 && b1.size == 4,
                    "b1 data"
                );
                ensure!(
                    b2.stabilizer.order() == 2 && b2.fiber_size == 2 && b2.size == 12,
                    "b2 data"
                );
                ensure!(young_label(&b1.invariant_point) == "S{1,2,3}", "W_b1");
                ensure!(young_label(&b2.invariant_point) == "S{1,2}", "W_b2");
                ensure!(an.chambers_b.len() == 32, "|Ch(B)| = {}", an.chambers_b.len());
            }
        }
    }
    within(start, Duration::from_secs(120), "restricted m=3..6")?;
    Ok(format!(
        "m=3..6 chi, chambers, orbits and ranking patterns exact; m=4 W_b orders 6 and 2 ({:?})",
        start.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let family = Family::UnrestrictedAllSubset;
    let arr = family.build(3).map_err(|e| e.to_string())?;
    let an = Analysis::new(&arr).map_err(|e| e.to_string())?;
    ensure!(
        an.chambers_c.len() == 60 && an.orbits.len() == 10,
        "m=3: {} chambers {} orbits",
        an.chambers_c.len(),
        an.orbits.len()
    );
    ensure!(an.chambers_b.len() == 32, "m=3: |Ch(B)| = {}", an.chambers_b.len());
    // Points of c_1..c_5 inside x1 > x2 > x3, chosen from their defining inequalities.
    let points: [[i64; 3]; 5] = [[3, 2, -4], [5, 1, -2], [5, -1, -2], [3, 2, -1], [3, 2, 1]];
    let groups = ["S{1,2}", "{1}", "S{2,3}", "S{1,2}", "S{1,2,3}"];
    let mirrored_labels = ["S{2,3}", "{1}", "S{1,2}", "S{2,3}", "S{1,2,3}"];
    let sizes = [3, 6, 3, 3, 1];
    let mut seen = BTreeSet::new();
    let mut labeled_orbits = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let mirrored = [-x[2], -x[1], -x[0]];
        for (y, primed) in [(x.to_vec(), false), (mirrored.to_vec(), true)] {
            let o = record_at(&an, &y)?;
            ensure!(seen.insert(o.chamber), "b{} repeats an orbit", i + 1);
            // x -> -reverse(x) conjugates W_b by i -> 4 - i.
            let expected = if primed { mirrored_labels[i] } else { groups[i] };
            let young = young_label(&o.invariant_point);
            ensure!(
                young == expected,
                "W_b{}{} = {young}",
                i + 1,
                if primed { "'" } else { "" }
            );
            ensure!(
                o.size == sizes[i] && o.fiber_size == o.stabilizer.order(),
                "b{}: size {}",
                i + 1,
                o.size
            );
            if !primed {
                labeled_orbits.push(an.orbits.iter().position(|r| r.chamber == o.chamber).expect("record"));
            }
        }
    }
    let class = an
        .tau_classes
        .iter()
        .find(|c| c.orbits.contains(&labeled_orbits[0]))
        .ok_or("no class for b1")?;
    let unprimed: BTreeSet<usize> = class
        .orbits
        .iter()
        .filter_map(|k| labeled_orbits.iter().position(|p| p == k).map(|i| i + 1))
        .collect();
    ensure!(
        unprimed == BTreeSet::from([1, 3, 4]),
        "tau preimage among b1..b5 is {unprimed:?}"
    );
    ensure!(
        class.orbits.len() == 6,
        "full tau class has {} orbits",
        class.orbits.len()
    );

    let (chi, count, orbits) = finite_field(family, 4)?;
    ensure!(
        chi == linear(&[1, 5, 7, 8]) && count == BigInt::from(864) && orbits == BigInt::from(36),
        "m=4: {chi}, {count}, {orbits}"
    );
    let (_, count, orbits) = finite_field(family, 5)?;
    ensure!(
        count == BigInt::from(26880) && orbits == BigInt::from(224),
        "m=5: {count}, {orbits}"
    );
    Ok(format!(
        "m=3 per-orbit data and tau preimage {{O(b1),O(b3),O(b4)}} (6 orbits with primes); m=4 864/36; m=5 26880/224 ({:?})",
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let family = Family::MidHyperplane;
    let an = Analysis::new(&family.build(4).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(
        an.chambers_c.len() == 48 && an.orbits.len() == 2,
        "m=4: {} chambers",
        an.chambers_c.len()
    );
    ensure!(an.chambers_b.len() == 8, "m=4: |Ch(B)| = {}", an.chambers_b.len());
    ensure!(
        an.orbits.iter().all(|o| o.stabilizer.order() == 6),
        "m=4 stabilizer orders"
    );
    let (chi, count, orbits) = finite_field(family, 5)?;
    ensure!(
        chi == linear(&[1, 7, 8, 9]) && count == BigInt::from(1440) && orbits == BigInt::from(12),
        "m=5"
    );
    let (chi, count, orbits) = finite_field(family, 6)?;
    ensure!(chi == linear(&[1, 13, 14, 15, 17]), "m=6: chi = {chi}");
    ensure!(
        count == BigInt::from(120960) && orbits == BigInt::from(168),
        "m=6: {count}, {orbits}"
    );
    within(start, Duration::from_secs(300), "mid-hyperplane m=4..6")?;
    Ok(format!(
        "m=4 48/2 with |Ch(B)|=8 and |W_b|=6; m=5 1440/12; m=6 120960/168 ({:?})",
        start.elapsed()
    ))
}

fn criterion_6() -> Outcome {
    let family = Family::SignedAllSubset;
    let an = Analysis::new(&family.build(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut orders: Vec<usize> = an.orbits.iter().map(|o| o.stabilizer.order()).collect();
    orders.sort();
    ensure!(
        an.chambers_c.len() == 96 && an.orbits.len() == 2,
        "m=3: {} chambers",
        an.chambers_c.len()
    );
    ensure!(
        an.chambers_b.len() == 14 && orders == [6, 8],
        "m=3: |Ch(B)| = {}, orders {orders:?}",
        an.chambers_b.len()
    );
    let (chi, count, orbits) = finite_field(family, 4)?;
    ensure!(chi == linear(&[1, 11, 13, 15]), "m=4: chi = {chi}");
    ensure!(
        count == BigInt::from(5376) && orbits == BigInt::from(14),
        "m=4: {count}, {orbits}"
    );
    let enumerated = chamber_orbits::chambers::enumerate_chambers(&family.build(4).map_err(|e| e.to_string())?);
    ensure!(enumerated.len() == 5376, "m=4: enumeration {}", enumerated.len());
    Ok("m=3 96/2 with |Ch(B)|=14 and orders 6, 8; m=4 chi exact, 5376/14".into())
}

/// Rows whose printed fiber size disagrees with their own chamber count.
const MISPRINTED_ROWS: &[(Family, usize)] = &[(Family::MidHyperplane, 8)];

fn criterion_7() -> Outcome {
    let rows: [(Family, &[usize]); 4] = [
        (Family::RestrictedAllSubset, &[7, 8, 9]),
        (Family::UnrestrictedAllSubset, &[6, 7]),
        (Family::MidHyperplane, &[7, 8, 9, 10]),
        (Family::SignedAllSubset, &[5, 6]),
    ];
    let mut exact = 0;
    let mut mismatches = Vec::new();
    for (family, ms) in rows {
        for &m in ms {
            let e = lookup(family, m).ok_or(format!("{family} m={m} missing"))?;
            ensure!(
                zaslavsky_count(&e.chi()) == e.chambers(),
                "{family} m={m}: (-1)^l chi(-1) = {}",
                zaslavsky_count(&e.chi())
            );
            let quotient = orbit_count(&e.chambers(), &family.group_type().order(m), false)
                .map_err(|err| err.to_string())?
                .orbits;
            ensure!(quotient == e.consistent_fiber(), "{family} m={m}: quotient {quotient}");
            if quotient == e.fiber() {
                exact += 1;
            } else {
                mismatches.push(format!(
                    "{family} m={m}: printed fiber {} but {} / |W| = {quotient}",
                    e.fiber, e.chambers
                ));
            }
        }
    }
    let r9 = lookup(Family::RestrictedAllSubset, 9).ok_or("restricted m=9 missing")?;
    ensure!(
        r9.chambers() / factorial(9) == BigInt::from(1_681_100),
        "restricted m=9 quotient"
    );
    let flagged: Vec<(Family, usize)> = REFERENCE
        .iter()
        .filter(|e| e.erratum.is_some())
        .map(|e| (e.family, e.m))
        .collect();
    ensure!(flagged == MISPRINTED_ROWS, "rows flagged in the table: {flagged:?}");
    if mismatches.is_empty() {
        Ok(format!("{exact} rows exact"))
    } else {
        Err(format!("{exact} rows exact; {}", mismatches.join("; ")))
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let expected_rows = [1u64, 3, 19, 183, 2371, 38703, 763099];
    let sequence = semiorder_count_sequence(7);
    ensure!(
        sequence.iter().zip(expected_rows).all(|(a, b)| *a == BigInt::from(b)),
        "sequence {sequence:?}"
    );
    let rows = verify_stirling_convolution(7);
    ensure!(
        rows.len() == 7 && rows.iter().all(|r| r.holds()),
        "Stirling convolution fails"
    );
    for (m, expected) in [(3usize, 19usize), (4, 183)] {
        let arr = Family::Catalan.build(m).map_err(|e| e.to_string())?;
        let direct = enumerate_hyperplanes(arr.ambient(), arr.stable_part()).len();
        ensure!(direct == expected, "|Ch(B_{m})| = {direct}");
        let posets = all_semiorders_brute_force(m).len();
        ensure!(posets == expected, "{posets} labeled semiorders on {m} points");
    }
    within(start, Duration::from_secs(10), "semiorders")?;
    Ok(format!(
        "1,3,19,183,2371,38703,763099 and both identities for m<=7; direct 19 and 183 ({:?})",
        start.elapsed()
    ))
}

fn criterion_9() -> Outcome {
    let required = [
        "simple-transitivity-on-A",
        "free-action-on-C",
        "fiber-transitivity",
        "orbit-stabilizer",
        "equivariance",
        "oracle-C",
        "prime-independence",
    ];
    let opts = VerifyOptions {
        seed: 7,
        samples: 128,
        oracle_max_hyperplanes: 24,
        ..VerifyOptions::default()
    };
    let mut total = 0;
    for family in Family::ALL {
        let m = family.min_m().max(3);
        let an = Analysis::new(&family.build(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let checks = run_all(&an, Some(family), &opts);
        for c in &checks {
            ensure!(!c.failed(), "{family} m={m}: {} failed: {}", c.name, c.detail);
        }
        for name in required {
            let c = checks
                .iter()
                .find(|c| c.name == name)
                .ok_or(format!("{name} missing"))?;
            ensure!(
                c.verdict == Verdict::Pass,
                "{family} m={m}: {name} {}",
                c.verdict.label()
            );
        }
        total += checks.len();
    }
    for m in 2..=5 {
        let ambient = AmbientSpace::zero_sum(m);
        let planes = build_braid(m, ambient);
        let brute = brute_force_sign_vectors(ambient, &planes);
        let listed: Vec<_> = enumerate_hyperplanes(ambient, &planes)
            .into_iter()
            .map(|c| c.signs)
            .collect();
        ensure!(
            brute == listed && listed.len() as u64 == (1..=m as u64).product::<u64>(),
            "braid m={m}"
        );
    }
    Ok(format!("{total} checks over all five families, braid oracle m=2..5"))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (n, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(detail) => {
                println!("criterion {n}: FAIL {detail}");
                // The only tolerated failure is the misprinted reference row; anything else is a regression.
                let documented = n == 7
                    && MISPRINTED_ROWS
                        .iter()
                        .all(|(f, m)| detail.contains(&format!("{f} m={m}:")))
                    && detail.matches("printed fiber").count() == MISPRINTED_ROWS.len();
                if !documented {
                    unexpected.push(n);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failed: {unexpected:?}");
        std::process::exit(1);
    }
}
