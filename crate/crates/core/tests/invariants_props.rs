mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use isolab::cochar::{newton_points_in_window, Q};
use isolab::invariants::{
    decency_check, decency_exponent, gl2_recover, hodge_point, hodge_sequence, minimal_bound, minimal_element,
    newton_point, sln_counterexample, stratum_scan, twisted_powers,
};
use isolab::sample::{self, tag, EntrySpec};
use isolab::{Cocharacter, FieldCtx, MatL};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Arc<FieldCtx>> {
    prop_oneof![Just((2, 2)), Just((3, 1)), Just((3, 2)), Just((5, 1))].prop_map(|(p, m)| FieldCtx::new(p, m).unwrap())
}

fn invertible(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MatL> {
    (field(), n, any::<u64>()).prop_map(|(ctx, n, seed)| {
        sample::invertible(&ctx, n, EntrySpec::new(-2, 2), &mut sample::stream(seed, tag::MATRIX, 0))
    })
}

fn newton_point_strategy() -> impl Strategy<Value = Cocharacter> {
    (1usize..=5).prop_flat_map(|n| {
        let pts = newton_points_in_window(n, Q::from(-1), Q::from(2), n);
        proptest::sample::select(pts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mazur_inequality(b in invertible(1..=5)) {
        let nu = newton_point(&b).unwrap();
        prop_assert!(nu.dominates(&hodge_point(&b).unwrap()).unwrap());
        prop_assert!(nu.is_newton_point());
    }

    #[test]
    fn newton_point_is_sigma_conjugation_invariant(b in invertible(1..=3), seed in any::<u64>()) {
        let (g, g_inv) = sample::with_inverse(b.ctx(), b.n(), 6, &mut sample::stream(seed, tag::CONJUGATE, 0));
        let c = g_inv.mul(&b).unwrap().mul(&g.sigma()).unwrap();
        prop_assert_eq!(newton_point(&c).unwrap(), newton_point(&b).unwrap());
    }

    #[test]
    fn hodge_sandwich(b in invertible(2..=4), seed in any::<u64>()) {
        let c = sample::invertible(b.ctx(), b.n(), EntrySpec::new(-2, 2), &mut sample::stream(seed, tag::PAIR, 0));
        let (mb, mc) = (hodge_point(&b).unwrap(), hodge_point(&c).unwrap());
        let mbc = hodge_point(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(mb.oplus_w0(&mc).unwrap().dominates(&mbc).unwrap());
        prop_assert!(mbc.dominates(&mb.oplus(&mc).unwrap()).unwrap());
    }

    #[test]
    fn signatures_are_consistent(b in invertible(1..=4)) {
        hodge_sequence(&b, 4).unwrap().check_consistency().unwrap();
    }

    #[test]
    fn gl2_recovery_agrees_with_newton_point(b in invertible(2..=2)) {
        let sig = hodge_sequence(&b, 2).unwrap();
        prop_assert_eq!(gl2_recover(&sig.mus[0], &sig.mus[1]).unwrap(), newton_point(&b).unwrap());
    }

    #[test]
    fn minimal_powers_match_minimal_element_of_multiple(nu in newton_point_strategy(), k in 1i64..=6) {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let b = minimal_element(&ctx, &nu).unwrap();
        let power = twisted_powers(&b, k as usize).pop().unwrap();
        let target = minimal_element(&ctx, &nu.mul_int(k)).unwrap();
        prop_assert_eq!(hodge_point(&power).unwrap(), hodge_point(&target).unwrap());
        prop_assert_eq!(newton_point(&power).unwrap(), newton_point(&target).unwrap());
    }

    #[test]
    fn minimal_elements_are_decent(nu in newton_point_strategy()) {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let b = minimal_element(&ctx, &nu).unwrap();
        prop_assert!(decency_check(&b, decency_exponent(&nu) as u64).unwrap());
        prop_assert_eq!(newton_point(&b).unwrap(), nu);
    }
}

#[test]
fn minimal_element_bound_for_small_ranks() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    for n in 1..=4 {
        for nu in newton_points_in_window(n, Q::from(-1), Q::from(1), n) {
            let b = minimal_element(&ctx, &nu).unwrap();
            for p in twisted_powers(&b, 8) {
                let d = newton_point(&p).unwrap().metric(&hodge_point(&p).unwrap()).unwrap();
                assert!(d <= minimal_bound(n), "nu={nu}: distance {d}");
            }
        }
    }
}

#[test]
fn sl3_stratum_holds_two_newton_points() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let (b1, b2) = sln_counterexample(&ctx, 3).unwrap();
    let sig = hodge_sequence(&b1, 2).unwrap();
    assert_eq!(sig, hodge_sequence(&b2, 2).unwrap());
    let report = stratum_scan(&ctx, &sig, 200, 1).unwrap();
    let found: BTreeSet<Cocharacter> = report.tallies.iter().map(|t| t.newton.clone()).collect();
    assert!(found.contains(&newton_point(&b1).unwrap()));
    assert!(found.contains(&newton_point(&b2).unwrap()));
    for t in &report.tallies {
        assert_eq!(hodge_sequence(&t.witness, 2).unwrap(), sig);
        assert_eq!(newton_point(&t.witness).unwrap(), t.newton);
    }
}

#[test]
fn scans_are_reproducible() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let sig = hodge_sequence(&MatL::diag_pi(&ctx, &[1, 0]), 2).unwrap();
    let a = stratum_scan(&ctx, &sig, 150, 7).unwrap();
    let b = stratum_scan(&ctx, &sig, 150, 7).unwrap();
    assert_eq!(a, b);
}
