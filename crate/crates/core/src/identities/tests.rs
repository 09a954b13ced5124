use super::*;
use crate::rational::{int, ratio};
use crate::series::{Monomial, SeriesError, TruncatedSeries, TruncationProfile};

fn mono(s: &str) -> Monomial {
    s.parse().unwrap()
}

fn profile(a: u32, b: u32, t: u32, q: u32) -> TruncationProfile {
    TruncationProfile::new(a, b, t, q)
}

#[test]
fn thm11_left_known_coefficients() {
    let p = profile(3, 3, 3, 12);
    let left = build_thm11_side(Side::Left, p).unwrap();
    assert_eq!(left.coefficient(&mono("a1b1t1q2")).unwrap(), int(1));
    // pure bᵏ coefficient: only the n = 0 summand 1/(1 − b) contributes
    for k in 0..=3 {
        assert_eq!(left.coefficient(&Monomial::b(k)).unwrap(), int(1));
    }
}

#[test]
fn thm11_verified_small() {
    let r = verify_thm11(profile(3, 3, 3, 12)).unwrap();
    assert!(r.is_verified(), "{r}");
}

#[test]
fn thm11_requires_equal_b_t_caps() {
    assert!(matches!(
        verify_thm11(profile(2, 3, 2, 8)),
        Err(IdentityError::Precondition(_))
    ));
}

#[test]
fn f_sym_formal_and_reduction() {
    let p = profile(2, 4, 4, 14);
    assert!(verify_f_sym_formal(p).unwrap().is_verified());
    let r = verify_reduction_a0(p).unwrap();
    assert!(r.is_verified(), "{r}");
    assert_eq!(r.caps.a, 0);
}

#[test]
fn eq31_known_coefficient_and_consistency() {
    let p = profile(2, 3, 3, 12);
    let left = build_eq31_side(Side::Left, p).unwrap();
    assert_eq!(left.coefficient(&mono("a1b1t1q3")).unwrap(), int(1));
    let r = verify_eq31(p).unwrap();
    assert!(r.is_verified(), "{r}");
}

#[test]
fn eq31_insufficient_input_cap_is_rejected() {
    let p = profile(2, 2, 2, 10);
    assert!(matches!(
        verify_eq31_with_input_cap(p, 11),
        Err(IdentityError::Precondition(_))
    ));
}

#[test]
fn thm35_b1_coefficients() {
    let p = profile(0, 1, 0, 6);
    let left = build_thm31_side(Thm31Side::Eq35Left, p).unwrap();
    let expect = [0, 0, 1, 1, 2, 2, 3];
    for (k, e) in expect.iter().enumerate() {
        let m = Monomial::new(0, 1, 0, k as u32);
        assert_eq!(left.coefficient(&m).unwrap(), int(*e), "q^{k}");
    }
    let r = verify_thm31(Thm31::Eq35, profile(0, 4, 0, 16)).unwrap();
    assert!(r.is_verified(), "{r}");
}

#[test]
fn thm34_reports_b1_q0_mismatch() {
    let r = verify_thm31(Thm31::Eq34, profile(2, 3, 0, 10)).unwrap();
    assert_eq!(r.status, Status::Mismatch);
    let first = r
        .mismatches
        .iter()
        .find(|m| m.monomial == mono("b1"))
        .expect("b1 row");
    assert_eq!(first.lhs, int(0));
    assert_eq!(first.rhs, int(-1));
}

#[test]
fn qps_terminating_examples() {
    for (a, b, c, n) in [
        (ratio(1, 2), ratio(1, 3), ratio(1, 5), 3),
        (int(2), int(3), ratio(1, 7), 4),
        (ratio(-2, 3), int(5), int(3), 0),
    ] {
        let asg = RationalAssignment::abcn(a, b, c, n);
        let r = verify_qps(&asg, 18).unwrap();
        assert!(r.is_verified(), "{r}");
    }
}

#[test]
fn eq22_rewrite_holds_and_at_most_variant_noted() {
    let asg = RationalAssignment::abcn(ratio(1, 2), ratio(1, 3), ratio(1, 5), 3);
    let r = verify_eq22(&asg, 16).unwrap();
    assert!(r.is_verified(), "{r}");
    assert!(r.notes.iter().any(|n| n.contains("differs")));
}

#[test]
fn eq23_examples() {
    for (a, b, n) in [(int(2), ratio(1, 3), 4), (ratio(1, 2), int(3), 2)] {
        let r = verify_eq23(&RationalAssignment::abn(a, b, n), 16).unwrap();
        assert!(r.is_verified(), "{r}");
    }
}

#[test]
fn chain_steps_verify() {
    let asg = RationalAssignment::abt(int(2), ratio(1, 3), ratio(1, 5));
    for step in [ChainStep::Start, ChainStep::Shift, ChainStep::Fine, ChainStep::Final] {
        let r = verify_chain(step, &asg, 12).unwrap();
        assert!(r.is_verified(), "{step:?}: {r}");
    }
    let r = verify_chain(ChainStep::Final, &asg, 12).unwrap();
    assert!(r.notes.iter().any(|n| n.contains("(atq^{n+1})_n: differs")));
}

#[test]
fn chain_rejects_a_zero() {
    let asg = RationalAssignment::abt(int(0), ratio(1, 3), ratio(1, 5));
    assert!(matches!(
        verify_chain(ChainStep::Start, &asg, 8),
        Err(IdentityError::InvalidParameter(_))
    ));
}

#[test]
fn geometric_weight_one_diverges() {
    let asg = RationalAssignment::abt(int(2), ratio(1, 3), int(1));
    assert!(matches!(
        rational_series_eval(RationalSide::ChainStart, &asg, 6),
        Err(IdentityError::Series(SeriesError::Divergent(_)))
    ));
}

#[test]
fn f_sym_rational_examples() {
    let r = verify_f_sym_rational(&ratio(1, 2), &ratio(1, 3), 1, 2, 20).unwrap();
    assert!(r.is_verified(), "{r}");
    let r = verify_f_sym_rational(&int(2), &int(5), 2, 3, 15).unwrap();
    assert!(r.is_verified(), "{r}");
}

#[test]
fn f_sym_rational_constant_term_oracle() {
    // at q⁰ only the n = 0 factor 1 − α survives; every other factor is ≡ 1
    let asg = RationalAssignment::f_sym(ratio(1, 2), ratio(1, 3), 1, 2);
    let s = rational_series_eval(RationalSide::FSym { swapped: false }, &asg, 4).unwrap();
    // n = 0 gives 1/(1 − 1/2) = 2; n ≥ 1 gives βⁿ at q⁰: Σ_{n≥1} 3⁻ⁿ = 1/2
    assert_eq!(s.coefficient(&Monomial::ONE).unwrap(), ratio(5, 2));
}

#[test]
fn missing_parameters_are_reported() {
    let asg = RationalAssignment::new();
    assert_eq!(
        run_case(IdentityCase::Qps21, Mode::Rational, TruncationProfile::q_only(4), &asg),
        Err(IdentityError::MissingParameter("a"))
    );
    assert!(matches!(
        run_case(IdentityCase::Thm1_1, Mode::Rational, profile(1, 1, 1, 4), &asg),
        Err(IdentityError::UnsupportedMode { .. })
    ));
}

#[test]
fn case_names_roundtrip() {
    for c in IdentityCase::ALL {
        assert_eq!(c.name().parse::<IdentityCase>().unwrap(), c);
    }
    assert_eq!("eq1_3".parse::<IdentityCase>().unwrap(), IdentityCase::Thm1_1);
    assert!("nope".parse::<IdentityCase>().is_err());
}

#[test]
fn report_json_shape() {
    let r = verify_thm11(profile(1, 1, 1, 4)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["case", "mode", "caps", "status", "mismatches", "notes", "volatile"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["status"], "verified");
    assert!(v.get("assignment").is_none());
    let back: VerificationReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn compare_respects_validity() {
    let p = TruncationProfile::q_only(6);
    let x = TruncatedSeries::term(p, int(1), Monomial::q(5));
    let y = TruncatedSeries::zero(p).with_valid_to_q(4);
    assert!(compare(&x, &y).is_empty());
    assert_eq!(compare(&x, &TruncatedSeries::zero(p)).len(), 1);
}
