use dlres::restlab::{gl2_irreducibles, restriction_census, restriction_report};
use dlres::{run_suite, CharIndex, Lab, Suite, TOLERANCE};
use proptest::prelude::*;

#[test]
fn restriction_theorem_over_f9() {
    let lab = Lab::new();
    let summary = run_suite(&lab, Suite::Restriction, &[9]).unwrap();
    assert!(summary.passed, "{:?}", summary.failures().next());
    // 8·8 split characters and 80 nonsplit ones
    assert_eq!(summary.total_checks, 64 + 80);
}

#[test]
fn census_over_f9_matches_index_arithmetic() {
    let lab = Lab::new();
    let c = restriction_census(&lab, 9).unwrap();
    assert_eq!(c.cuspidal_orbits, 9 * 8 / 2);
    assert!(c.matches_index_census && c.all_predictions_matched && c.dimension_accounting_ok);
}

#[test]
fn regular_in_gl2_agrees_with_regular_on_the_sl2_torus() {
    let lab = Lab::new();
    for q in [3u32, 5, 7, 9] {
        for r in restriction_census(&lab, q).unwrap().reports {
            assert!(r.regular_h.is_some());
            assert_eq!(r.regular_h, r.regular_in_g, "q={q} {:?}", r.theta);
        }
    }
}

#[test]
fn gl2_character_table_is_unitary_q5() {
    let lab = Lab::new();
    let g = lab.gl2(5).unwrap();
    let irr = gl2_irreducibles(&lab, 5).unwrap();
    assert_eq!(irr.len(), g.classes().len());
    // column orthogonality: sum over chi of |chi(x)|^2 = |C_G(x)|
    for (i, class) in g.classes().iter().enumerate() {
        let col: f64 = irr.iter().map(|c| c.character.values()[i].norm_sqr()).sum();
        assert!((col - (g.order() / class.size()) as f64).abs() < 1e-6, "class {i}");
    }
}

#[test]
fn intermediate_subgroup_restriction_q7() {
    let lab = Lab::new();
    // |D| = 3 has index 2 in F_7^x. The order-2 twist moves j = 20 to 20 + 3·8 = 44 = 7·20 mod 48,
    // which is its Frobenius conjugate, so the cuspidal splits in two.
    let r = restriction_report(&lab, 7, CharIndex::Nonsplit(20), 3).unwrap();
    assert!(r.clifford_consistent);
    assert_eq!((r.twist_stabilizer_size, r.multiplicity, r.component_count), (2, Some(1), Some(2)));
    let r = restriction_report(&lab, 7, CharIndex::Nonsplit(1), 3).unwrap();
    assert_eq!((r.multiplicity, r.component_count), (Some(1), Some(1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cuspidals_are_irreducible(q in prop::sample::select(vec![3u32, 5, 7]), j in 0u32..48) {
        let n = q * q - 1;
        let j = j % n;
        prop_assume!(j % (q + 1) != 0);
        let lab = Lab::new();
        let r = lab.gl2_character(q, CharIndex::Nonsplit(j)).unwrap();
        prop_assert!((r.norm_sq() - 1.0).abs() < TOLERANCE);
        prop_assert!((r.degree().re - (1.0 - q as f64)).abs() < TOLERANCE);
    }

    #[test]
    fn split_and_nonsplit_are_orthogonal(
        q in prop::sample::select(vec![3u32, 5]),
        a in 0u32..4, b in 0u32..4, j in 0u32..24,
    ) {
        let lab = Lab::new();
        let s = lab.gl2_character(q, CharIndex::Split(a % (q - 1), b % (q - 1))).unwrap();
        let ns = lab.gl2_character(q, CharIndex::Nonsplit(j % (q * q - 1))).unwrap();
        prop_assert!(s.inner_product(&ns).unwrap().norm() < TOLERANCE);
        prop_assert_eq!(s.owner().label(), "GL2(F_q)".replace('q', &q.to_string()));
    }
}
