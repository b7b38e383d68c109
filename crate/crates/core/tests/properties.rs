use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use polcorr::{
    born_table, chi, classical_table, predict_table, quantum_table_closed, Angle64, ModelKind,
    Port, Sign, SourceConfig64, TwoQubitState64,
};
use proptest::prelude::*;

fn ang(x: f64) -> Angle64 {
    Angle64::new(x).unwrap()
}

fn any_model() -> impl Strategy<Value = ModelKind> {
    prop_oneof![
        Just(ModelKind::ClassicalMalus),
        Just(ModelKind::QUANTUM_MINUS),
        Just(ModelKind::QUANTUM_PLUS),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn quantum_minus_rotationally_invariant(t1 in -10.0..10.0f64, t2 in -10.0..10.0f64, d in -10.0..10.0f64) {
        let a = quantum_table_closed(ang(t1 + d), ang(t2 + d), Sign::Minus);
        let b = quantum_table_closed(ang(t1), ang(t2), Sign::Minus);
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn closed_form_matches_born_projection(t1 in 0.0..PI, t2 in 0.0..PI) {
        for sign in [Sign::Minus, Sign::Plus] {
            let born = born_table(&TwoQubitState64::anticorrelated(sign), ang(t1), ang(t2)).unwrap();
            prop_assert!(quantum_table_closed(ang(t1), ang(t2), sign).max_abs_diff(&born) <= 1e-12);
        }
    }

    #[test]
    fn tables_are_distributions(t1 in -5.0..5.0f64, t2 in -5.0..5.0f64, phi in 0.0..PI, w in 0.0..=1.0f64, model in any_model()) {
        let src = SourceConfig64::new(ang(phi), w).unwrap();
        let t = predict_table(model, ang(t1), ang(t2), &src);
        prop_assert!((t.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(t.cells().iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!(t.chi().abs() <= 1.0);
    }

    #[test]
    fn single_channel_marginals_are_half(t1 in 0.0..PI, t2 in 0.0..PI, model in any_model()) {
        let t = predict_table(model, ang(t1), ang(t2), &SourceConfig64::default());
        prop_assert!((t.marginal_first(Port::V) - 0.5).abs() <= 1e-12);
        prop_assert!((t.marginal_second(Port::V) - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn classical_cell_symmetries(t1 in 0.0..PI, t2 in 0.0..PI) {
        let t = classical_table(ang(t1), ang(t2), &SourceConfig64::default());
        prop_assert!((t.p_vv() - t.p_hh()).abs() <= 1e-12);
        prop_assert!((t.p_vh() - t.p_hv()).abs() <= 1e-12);
    }

    #[test]
    fn classical_chi_factorizes(t1 in 0.0..PI, t2 in 0.0..PI) {
        let c = ModelKind::ClassicalMalus;
        let lhs = chi(ang(t1), ang(t2), c);
        let rhs = -chi(ang(t1), ang(0.0), c) * chi(ang(0.0), ang(t2), c);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn source_axis_rotates_classical_model(t1 in 0.0..PI, t2 in 0.0..PI, phi in 0.0..PI) {
        let rotated = SourceConfig64::new(ang(phi), 0.5).unwrap();
        let a = classical_table(ang(t1 + phi), ang(t2 + phi), &rotated);
        let b = classical_table(ang(t1), ang(t2), &SourceConfig64::default());
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }
}

#[test]
fn classical_model_is_not_rotationally_invariant() {
    let src = SourceConfig64::default();
    let a = classical_table(ang(0.0), ang(0.0), &src);
    let b = classical_table(ang(FRAC_PI_4), ang(FRAC_PI_4), &src);
    assert!(a.max_abs_diff(&b) > 0.1);
}

#[test]
fn plus_state_is_not_rotationally_invariant() {
    let a = quantum_table_closed(ang(0.0), ang(FRAC_PI_2), Sign::Plus);
    let b = quantum_table_closed(ang(FRAC_PI_4), ang(FRAC_PI_2 + FRAC_PI_4), Sign::Plus);
    assert!(a.max_abs_diff(&b) > 0.1);
}

#[test]
fn equal_weights_give_quarter_offset_curves() {
    // Only w = ½ makes every curve oscillate symmetrically about ¼.
    for w in [0.5, 0.8] {
        let src = SourceConfig64::new(ang(0.0), w).unwrap();
        let t1 = ang(0.3);
        let lo = classical_table(t1, ang(0.0), &src).p_vv();
        let hi = classical_table(t1, ang(FRAC_PI_2), &src).p_vv();
        let centered = ((lo + hi) / 2.0 - 0.25).abs() < 1e-12;
        assert_eq!(centered, w == 0.5, "w = {w}");
    }
}
