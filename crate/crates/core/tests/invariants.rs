//! Property tests for invariants that must hold for every input, not just the tabulated ones.

use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use chamber_orbits::analysis::Analysis;
use chamber_orbits::arrangement::{Arrangement, Family};
use chamber_orbits::chambers::chamber_of_point;
use chamber_orbits::exactmath::{factorial, lagrange_interpolate, rational, IntegerPolynomial, Rational};
use chamber_orbits::group::{stabilizer_from_average, young_composition, GroupType, Part};
use chamber_orbits::semiorder::{is_semiorder, semiorder_of_point};

const CASES: [(Family, usize); 6] = [
    (Family::Catalan, 3),
    (Family::Catalan, 4),
    (Family::RestrictedAllSubset, 4),
    (Family::UnrestrictedAllSubset, 3),
    (Family::MidHyperplane, 4),
    (Family::SignedAllSubset, 3),
];

fn analyses() -> &'static Vec<Analysis> {
    static CELL: OnceLock<Vec<Analysis>> = OnceLock::new();
    CELL.get_or_init(|| {
        CASES
            .iter()
            .map(|(f, m)| Analysis::new(&f.build(*m).expect("builds")).expect("analysis"))
            .collect()
    })
}

/// A point of the ambient space from small numerators over 4.
fn point_in(arr: &Arrangement, numerators: &[i64]) -> Vec<Rational> {
    let ambient = arr.ambient();
    let reduced = numerators[..ambient.dimension()]
        .iter()
        .map(|&n| rational(n, 4))
        .collect();
    ambient.lift(reduced)
}

fn numerators() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-24i64..=24, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generic_points_lie_in_enumerated_chambers(case in 0..CASES.len(), nums in numerators()) {
        let an = &analyses()[case];
        let x = point_in(an.arrangement(), &nums);
        if let Ok(c) = chamber_of_point(an.arrangement(), &x) {
            prop_assert!(an.chambers_c.iter().any(|d| d.signs == c.signs));
        }
    }

    #[test]
    fn group_action_commutes_with_locating_points(case in 0..CASES.len(), nums in numerators(), pick in any::<prop::sample::Index>()) {
        let an = &analyses()[case];
        let arr = an.arrangement();
        let x = point_in(arr, &nums);
        let element = pick.index(an.group().order());
        if let Ok(c) = chamber_of_point(arr, &x) {
            let moved = an.group().elements()[element].apply(&x);
            let image = chamber_of_point(arr, &moved).expect("the group permutes the hyperplanes");
            prop_assert_eq!(an.ctx.act(element, &c.signs, Part::Whole), image.signs);
        }
    }

    #[test]
    fn orbit_size_times_stabilizer_order_is_group_order(case in 0..CASES.len(), pick in any::<prop::sample::Index>()) {
        let an = &analyses()[case];
        let b = pick.index(an.chambers_b.len());
        let stab = an.ctx.stabilizer(&an.chambers_b[b].signs, Part::Stable);
        let size = an.orbits_b.sizes[an.orbits_b.membership[b]];
        prop_assert_eq!(size * stab.order(), an.group().order());
        prop_assert!(stab.is_closed());
    }

    #[test]
    fn unit_interval_orders_are_semiorders(nums in prop::collection::vec(-40i64..=40, 1..7), shift in -10i64..=10) {
        let x: Vec<Rational> = nums.iter().map(|&n| rational(n, 8)).collect();
        let poset = semiorder_of_point(&x);
        prop_assert_eq!(is_semiorder(&poset), Ok(None));
        let shifted: Vec<Rational> = x.iter().map(|v| v + rational(shift, 3)).collect();
        prop_assert_eq!(semiorder_of_point(&shifted), poset);
    }

    #[test]
    fn young_subgroups_fix_their_point(values in prop::collection::vec(0i64..4, 1..6)) {
        let z: Vec<Rational> = values.iter().map(|&n| rational(n, 1)).collect();
        let composition = young_composition(&z);
        prop_assert_eq!(composition.iter().sum::<usize>(), z.len());
        let young = stabilizer_from_average(GroupType::A, &z).expect("type A");
        let order: BigInt = composition.iter().map(|&k| factorial(k as u64)).product();
        prop_assert_eq!(BigInt::from(young.order()), order);
        prop_assert!(young.elements().iter().all(|w| w.apply(&z) == z));
    }

    #[test]
    fn interpolation_recovers_products_of_linear_factors(roots in prop::collection::vec(-9i64..=30, 0..6)) {
        let chi = IntegerPolynomial::from_roots(&roots);
        for r in &roots {
            prop_assert_eq!(chi.eval_i64(*r), BigInt::from(0));
        }
        let nodes: Vec<(BigInt, BigInt)> = (0..=roots.len() as i64).map(|t| (BigInt::from(t * 7 + 31), chi.eval_i64(t * 7 + 31))).collect();
        prop_assert_eq!(lagrange_interpolate(&nodes).expect("distinct nodes"), chi);
    }
}
