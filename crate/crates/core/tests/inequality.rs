mod common;

use common::*;
use opconvex::functions::operator_convex_defaults;
use opconvex::inequality::{
    ah_reduced_gaps, bregman_divergence, bregman_resolvent_closed_form, build_dilation, midpoint_from_dilation_check,
    modulus_of_convexity, strengthened_ah_gap, theorem1_gap, theorem1_rhs, ConvexityInstance,
};
use opconvex::{min_eigenvalue, psd_certificate, HermitianMatrix};
use proptest::prelude::*;

const C_GRID: [f64; 7] = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lower_bound_holds_for_operator_convex_functions(seed in any::<u64>(), n in 1usize..=8, k in 0usize..6, ci in 0usize..7) {
        let func = operator_convex_defaults()[k].clone();
        let (a, b) = pd_pair(seed, n);
        let inst = ConvexityInstance::new(a, b, C_GRID[ci], func).unwrap();
        let v = psd_certificate(&theorem1_gap(&inst).unwrap(), 1e-8).unwrap();
        prop_assert!(v.is_psd, "{:?}", v);
    }

    #[test]
    fn square_is_an_equality(seed in any::<u64>(), n in 1usize..=8, c in 0.01f64..0.99) {
        let (a, b) = pd_pair(seed, n);
        let d = (&a - &b).max_abs();
        let inst = ConvexityInstance::new(a, b, c, f("square")).unwrap();
        prop_assert!(theorem1_gap(&inst).unwrap().max_abs() <= 1e-10 * (1.0 + d * d));
    }

    #[test]
    fn square_modulus_is_c_one_minus_c_times_squared_difference(seed in any::<u64>(), n in 1usize..=6, c in 0.01f64..0.99) {
        let (a, b) = pd_pair(seed, n);
        let d = &a - &b;
        let want = HermitianMatrix::new(d.as_matrix() * d.as_matrix()).unwrap() * (c * (1.0 - c));
        let inst = ConvexityInstance::new(a, b, c, f("square")).unwrap();
        let got = modulus_of_convexity(&inst).unwrap();
        prop_assert!((got - want.clone()).max_abs() <= 1e-12 * (1.0 + want.max_abs()));
    }

    #[test]
    fn bregman_divergence_is_psd(seed in any::<u64>(), n in 1usize..=8, k in 0usize..6) {
        let func = &operator_convex_defaults()[k];
        let (a, b) = pd_pair(seed, n);
        let d = bregman_divergence(func, &a, &b).unwrap();
        prop_assert!(min_eigenvalue(&d).unwrap() >= -1e-10 * (1.0 + d.max_abs()));
    }

    #[test]
    fn resolvent_bregman_matches_closed_form(seed in any::<u64>(), n in 1usize..=8, s in 0.05f64..10.0) {
        let (a, b) = pd_pair(seed, n);
        let general = bregman_divergence(&f(&format!("resolvent:{s}")), &a, &b).unwrap();
        let closed = bregman_resolvent_closed_form(s, &a, &b).unwrap();
        prop_assert!((general - closed.clone()).max_abs() <= 1e-9 * (1.0 + closed.max_abs()));
    }

    #[test]
    fn strengthened_ah_is_psd_under_shifts(seed in any::<u64>(), n in 1usize..=8) {
        let (a, b) = pd_pair(seed, n);
        for lambda in [0.0, 0.1, 1.0, 10.0] {
            let g = strengthened_ah_gap(&a.shift(lambda), &b.shift(lambda)).unwrap();
            let v = psd_certificate(&g, 1e-8).unwrap();
            prop_assert!(v.is_psd, "shift {lambda}: {v:?}");
        }
    }

    #[test]
    fn ah_reduced_gaps_are_nonnegative(seed in any::<u64>(), n in 1usize..=6) {
        let (a, b) = pd_pair(seed, n);
        for (gamma, gap) in ah_reduced_gaps(&a, &b).unwrap() {
            prop_assert!(gamma > 0.0);
            prop_assert!(gap >= -1e-12, "gamma {gamma} gap {gap}");
        }
    }

    #[test]
    fn dilation_identities_hold(seed in any::<u64>(), n in 1usize..=6, c in 0.0f64..=1.0) {
        let (a, b) = pd_pair(seed, n);
        let d = build_dilation(&a, &b, c).unwrap().defects(&a, &b, c).unwrap();
        prop_assert!(d.max() <= 1e-10, "{d:?}");
    }
}

#[test]
fn dilated_midpoint_bound_is_dominated_by_the_modulus() {
    for seed in 0..12u64 {
        let n = 1 + (seed as usize % 4);
        let (a, b) = pd_pair(seed, n);
        for func in operator_convex_defaults() {
            for c in [0.2, 0.5, 0.7] {
                let v = midpoint_from_dilation_check(&func, &a, &b, c, 1e-8).unwrap();
                assert!(v.is_psd, "{} seed {seed} c {c}: {v:?}", func.name());
            }
        }
    }
}

#[test]
fn bound_is_symmetric_under_swapping_a_b_and_c() {
    let (a, b) = pd_pair(3, 4);
    for func in operator_convex_defaults() {
        let lhs = theorem1_rhs(&ConvexityInstance::new(a.clone(), b.clone(), 0.3, func.clone()).unwrap()).unwrap();
        let rhs = theorem1_rhs(&ConvexityInstance::new(b.clone(), a.clone(), 0.7, func.clone()).unwrap()).unwrap();
        assert!((lhs - rhs.clone()).max_abs() <= 1e-10 * (1.0 + rhs.max_abs()), "{}", func.name());
    }
}

#[test]
fn scalar_bound_matches_hand_arithmetic() {
    // neglog at A = 1, B = 3, c = 1/4: M(c) = 2.5, M(1 − c) = 1.5
    let modulus = 0.75 * -(3f64.ln()) + 2.5f64.ln();
    let bregman = -(1.5f64.ln()) + 2.5f64.ln() + (1.5 - 2.5) / 2.5;
    let want = modulus - 0.1875 / 0.25 * bregman;
    let inst = ConvexityInstance::new(
        HermitianMatrix::scalar(1.0).unwrap(),
        HermitianMatrix::scalar(3.0).unwrap(),
        0.25,
        f("neglog"),
    )
    .unwrap();
    let got = theorem1_gap(&inst).unwrap().get(0, 0).re;
    assert!((got - want).abs() < 1e-14);
    assert!(got > 0.0);
}
