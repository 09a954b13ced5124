use proptest::prelude::*;

use super::*;
use crate::rational::{int, ratio};

fn p(a: u32, b: u32, t: u32, q: u32) -> TruncationProfile {
    TruncationProfile::new(a, b, t, q)
}

fn s(profile: TruncationProfile, terms: &[(Monomial, i64)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(profile, terms.iter().map(|(m, c)| (*m, int(*c))))
}

const Q: fn(u32) -> Monomial = Monomial::q;

#[test]
fn add_cancels_and_merges() {
    let pr = p(2, 2, 2, 4);
    let x = s(pr, &[(Monomial::ONE, 1), (Q(1), 1)]);
    let y = s(pr, &[(Monomial::ONE, 1), (Q(1), -1)]);
    assert_eq!(x.add(&y).unwrap(), s(pr, &[(Monomial::ONE, 2)]));
    assert_eq!(x.add(&TruncatedSeries::zero(pr)).unwrap(), x);
    let abq2 = s(pr, &[(Monomial::new(1, 1, 0, 2), 1)]);
    assert_eq!(
        abq2.add(&abq2).unwrap(),
        s(pr, &[(Monomial::new(1, 1, 0, 2), 2)])
    );
}

#[test]
fn mixed_profiles_are_rejected() {
    let x = TruncatedSeries::one(p(1, 1, 1, 1));
    let y = TruncatedSeries::one(p(1, 1, 1, 2));
    assert!(matches!(x.add(&y), Err(SeriesError::ProfileMismatch(..))));
    assert!(matches!(x.mul(&y), Err(SeriesError::ProfileMismatch(..))));
}

#[test]
fn mul_telescopes_and_truncates() {
    let pr = p(0, 0, 0, 3);
    let x = s(pr, &[(Monomial::ONE, 1), (Q(1), -1)]);
    let y = s(pr, &[(Monomial::ONE, 1), (Q(1), 1), (Q(2), 1), (Q(3), 1)]);
    assert_eq!(x.mul(&y).unwrap(), TruncatedSeries::one(pr));

    let pr = p(2, 2, 2, 4);
    let z = s(pr, &[(Monomial::ONE, 1), (Monomial::new(1, 1, 0, 2), 1)]);
    assert_eq!(z.mul(&TruncatedSeries::one(pr)).unwrap(), z);
}

#[test]
fn geometric_in_b_cancels_within_caps() {
    for cap_b in 0..6 {
        let pr = p(0, cap_b, 0, 0);
        let one_minus_b = s(pr, &[(Monomial::ONE, 1), (Monomial::b(1), -1)]);
        let geo = TruncatedSeries::from_terms(pr, (0..=cap_b).map(|k| (Monomial::b(k), int(1))));
        assert_eq!(one_minus_b.mul(&geo).unwrap(), TruncatedSeries::one(pr));
    }
}

#[test]
fn invert_one_minus_examples() {
    let pr = p(0, 0, 0, 3);
    let inv = TruncatedSeries::invert_one_minus(&s(pr, &[(Q(1), 1)])).unwrap();
    assert_eq!(
        inv,
        s(pr, &[(Monomial::ONE, 1), (Q(1), 1), (Q(2), 1), (Q(3), 1)])
    );

    let pr = p(0, 2, 0, 0);
    let inv = TruncatedSeries::invert_one_minus(&s(pr, &[(Monomial::b(1), 1)])).unwrap();
    assert_eq!(
        inv,
        s(pr, &[(Monomial::ONE, 1), (Monomial::b(1), 1), (Monomial::b(2), 1)])
    );

    // multiply-back oracle for x = bq + q²
    let pr = p(0, 3, 0, 6);
    let x = s(pr, &[(Monomial::new(0, 1, 0, 1), 1), (Q(2), 1)]);
    let inv = TruncatedSeries::invert_one_minus(&x).unwrap();
    let back = inv.mul(&TruncatedSeries::one(pr).sub(&x).unwrap()).unwrap();
    assert_eq!(back, TruncatedSeries::one(pr));
    assert_eq!(inv.coefficient(&Monomial::new(0, 2, 0, 2)).unwrap(), int(1));
}

#[test]
fn invert_rejects_constant_term() {
    let pr = p(0, 0, 0, 3);
    let x = s(pr, &[(Monomial::ONE, 2), (Q(1), 1)]);
    assert!(matches!(
        TruncatedSeries::invert_one_minus(&x),
        Err(SeriesError::ConstantTerm(_))
    ));
}

#[test]
fn reciprocal_of_unit() {
    let pr = p(0, 0, 0, 8);
    let x = s(pr, &[(Monomial::ONE, 3), (Q(2), -1)]);
    let r = x.reciprocal().unwrap();
    assert_eq!(r.mul(&x).unwrap(), TruncatedSeries::one(pr));
    assert_eq!(r.coefficient(&Q(0)).unwrap(), ratio(1, 3));
    assert_eq!(r.coefficient(&Q(2)).unwrap(), ratio(1, 9));
    assert!(TruncatedSeries::zero(pr).reciprocal().is_err());
}

#[test]
fn pochhammer_finite_examples() {
    let pr = p(2, 2, 2, 6);
    // (-ab q^{n+1}; q)_n at n = 1
    let f = pochhammer_finite(&int(-1), Monomial::new(1, 1, 0, 0), 2, 1, 1, pr).unwrap();
    assert_eq!(f, s(pr, &[(Monomial::ONE, 1), (Monomial::new(1, 1, 0, 2), 1)]));

    let f = pochhammer_finite(&int(5), Monomial::b(1), 3, 1, 0, pr).unwrap();
    assert_eq!(f, TruncatedSeries::one(pr));

    let f = pochhammer_finite(&int(1), Monomial::b(1), 1, 1, 2, pr).unwrap();
    assert_eq!(
        f,
        s(
            pr,
            &[
                (Monomial::ONE, 1),
                (Monomial::new(0, 1, 0, 1), -1),
                (Monomial::new(0, 1, 0, 2), -1),
                (Monomial::new(0, 2, 0, 3), 1),
            ]
        )
    );

    assert!(matches!(
        pochhammer_finite(&int(1), Monomial::b(1), -2, 1, 3, pr),
        Err(SeriesError::NegativeExponent(_))
    ));
}

/// Coefficients of ∏_{k=1}^{cap} (1 − q^k) by plain integer convolution.
fn euler_product_oracle(cap: usize) -> Vec<i64> {
    let mut c = vec![0i64; cap + 1];
    c[0] = 1;
    for k in 1..=cap {
        for d in (k..=cap).rev() {
            c[d] -= c[d - k];
        }
    }
    c
}

#[test]
fn pochhammer_infinite_examples() {
    let pr = p(0, 0, 0, 5);
    let e = pochhammer_infinite(&int(1), Monomial::ONE, 1, 1, pr).unwrap();
    let oracle = euler_product_oracle(5);
    assert_eq!(oracle, vec![1, -1, -1, 0, 0, 1]);
    for (d, c) in oracle.iter().enumerate() {
        assert_eq!(e.coefficient(&Q(d as u32)).unwrap(), int(*c));
    }

    let pr0 = p(0, 0, 0, 0);
    assert_eq!(
        pochhammer_infinite(&int(1), Monomial::ONE, 1, 1, pr0).unwrap(),
        TruncatedSeries::one(pr0)
    );

    let pr = p(0, 0, 1, 3);
    let e = pochhammer_infinite(&int(1), Monomial::t(1), 1, 1, pr).unwrap();
    assert_eq!(
        e,
        s(
            pr,
            &[
                (Monomial::ONE, 1),
                (Monomial::new(0, 0, 1, 1), -1),
                (Monomial::new(0, 0, 1, 2), -1),
                (Monomial::new(0, 0, 1, 3), -1),
            ]
        )
    );

    assert!(matches!(
        pochhammer_infinite(&int(1), Monomial::t(1), 0, 1, pr),
        Err(SeriesError::NonTruncating(_))
    ));
}

#[test]
fn pentagonal_expansion_to_q40() {
    let cap = 40;
    let e = pochhammer_infinite(&int(1), Monomial::ONE, 1, 1, p(0, 0, 0, cap)).unwrap();
    let oracle = euler_product_oracle(cap as usize);
    for (d, c) in oracle.iter().enumerate() {
        assert_eq!(e.coefficient(&Q(d as u32)).unwrap(), int(*c), "q^{d}");
    }
}

#[test]
fn substitute_q_power_examples() {
    let pr = p(0, 0, 0, 5);
    let x = s(pr, &[(Monomial::ONE, 1), (Q(1), 1)]);
    assert_eq!(
        x.substitute_q_power(2).unwrap(),
        s(pr, &[(Monomial::ONE, 1), (Q(2), 1)])
    );
    let x = s(pr, &[(Q(3), 1)]);
    assert!(x.substitute_q_power(3).unwrap().is_zero());
    assert!(x.substitute_q_power(0).is_err());
}

#[test]
fn substitution_validity_accounting() {
    let pr = p(0, 0, 0, 20);
    let x = TruncatedSeries::one(pr).with_valid_to_q(4);
    assert_eq!(x.substitute_q_power(2).unwrap().valid_to_q(), 9);
    assert_eq!(x.substitute_q_power(3).unwrap().valid_to_q(), 14);
    assert_eq!(x.substitute_q_power(10).unwrap().valid_to_q(), 20);
}

#[test]
fn shift_a_by_q_examples() {
    let pr = p(2, 2, 2, 6);
    let x = s(pr, &[(Monomial::new(1, 1, 0, 2), 1)]);
    assert_eq!(
        x.shift_a_by_q(-1).unwrap(),
        s(pr, &[(Monomial::new(1, 1, 0, 1), 1)]).with_valid_to_q(4)
    );
    assert_eq!(x.shift_a_by_q(-1).unwrap().valid_to_q(), 4);
    let y = s(pr, &[(Monomial::new(2, 0, 0, 1), 1)]);
    assert!(matches!(
        y.shift_a_by_q(-1),
        Err(SeriesError::NegativeExponent(_))
    ));
}

#[test]
fn swap_b_t_examples() {
    let pr = p(0, 2, 2, 0);
    let x = s(pr, &[(Monomial::new(0, 1, 2, 0), 1)]);
    assert_eq!(x.swap_b_t().unwrap(), s(pr, &[(Monomial::new(0, 2, 1, 0), 1)]));
    let sym = s(pr, &[(Monomial::new(0, 1, 1, 0), 3), (Monomial::ONE, 1)]);
    assert_eq!(sym.swap_b_t().unwrap(), sym);
    assert!(matches!(
        TruncatedSeries::one(p(0, 1, 2, 0)).swap_b_t(),
        Err(SeriesError::AsymmetricCaps { .. })
    ));
}

#[test]
fn coefficient_bounds() {
    let pr = p(1, 1, 1, 4);
    let z = TruncatedSeries::zero(pr);
    assert_eq!(z.coefficient(&Monomial::new(1, 1, 1, 4)).unwrap(), int(0));
    assert!(matches!(
        z.coefficient(&Monomial::new(2, 0, 0, 0)),
        Err(SeriesError::OutsideProfile { .. })
    ));
    let z = z.with_valid_to_q(2);
    assert!(matches!(
        z.coefficient(&Q(3)),
        Err(SeriesError::OutsideValidity { .. })
    ));
}

#[test]
fn product_term_normalizes_negative_exponents() {
    // (q^{-2}; q)_2 = (1 − q^{-2})(1 − q^{-1}) = q^{-3}(q² − 1)(q − 1): Laurent.
    let pr = p(0, 0, 0, 6);
    let t = ProductTerm::new().times_poch(&int(1), Monomial::ONE, -2, 1, 2);
    assert!(matches!(t.expand(pr), Err(SeriesError::NegativeExponent(_))));
    // q³·(q^{-2}; q)_2 = (q² − 1)(q − 1) = 1 − q − q² + q³
    let t = t.times_q(3);
    assert_eq!(
        t.expand(pr).unwrap(),
        s(pr, &[(Monomial::ONE, 1), (Q(1), -1), (Q(2), -1), (Q(3), 1)])
    );
    // (q^{-2}; q)_3 contains the factor (1 − q⁰) and vanishes.
    let t = ProductTerm::new()
        .times_poch(&int(1), Monomial::ONE, -2, 1, 3)
        .times_q(10);
    assert!(t.expand(pr).unwrap().is_zero());
}

#[test]
fn product_term_zero_denominator() {
    let pr = p(0, 0, 0, 4);
    let t = ProductTerm::new().over_factor(int(1), Monomial::ONE, 0);
    assert!(matches!(t.expand(pr), Err(SeriesError::ZeroDenominator(_))));
    let t = ProductTerm::new().over_factor(ratio(1, 3), Monomial::ONE, 0);
    assert_eq!(t.expand(pr).unwrap(), TruncatedSeries::constant(pr, ratio(3, 2)));
}

#[test]
fn geometric_tail_matches_closed_form() {
    // Σ_k w^k / (1 − q^{k+1}) with w = 1/3: stable (≡ 1) once k ≥ cap_q.
    let cap = 6;
    let pr = p(0, 0, 0, cap);
    let w = ratio(1, 3);
    let sum = sum_with_geometric_tail(&w, 0, cap, pr, |k| {
        ProductTerm::new()
            .over_factor(int(1), Monomial::ONE, k as i64 + 1)
            .expand(pr)
    })
    .unwrap();
    // coefficient of q^d is Σ_{k+1 | d} w^k for d ≥ 1, and 1/(1 − w) at d = 0
    assert_eq!(sum.coefficient(&Q(0)).unwrap(), ratio(3, 2));
    for d in 1..=cap {
        let expected: Rational = (1..=d)
            .filter(|m| d % m == 0)
            .map(|m| crate::rational::pow(&w, (m - 1) as usize))
            .sum();
        assert_eq!(sum.coefficient(&Q(d)).unwrap(), expected, "q^{d}");
    }
    let too_short = sum_with_geometric_tail(&w, 0, 2, pr, |k| {
        ProductTerm::new()
            .over_factor(int(1), Monomial::ONE, k as i64 + 1)
            .expand(pr)
    });
    assert!(matches!(
        too_short,
        Err(SeriesError::IndexBoundInsufficient(_))
    ));
    assert!(matches!(
        sum_with_geometric_tail(&int(1), 0, 2, pr, |_| Ok(TruncatedSeries::one(pr))),
        Err(SeriesError::Divergent(_))
    ));
}

const PROP: TruncationProfile = TruncationProfile::new(2, 2, 2, 5);

fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(
        ((0u32..=2, 0u32..=2, 0u32..=2, 0u32..=5), -4i64..=4, 1i64..=3),
        0..8,
    )
    .prop_map(|terms| {
        TruncatedSeries::from_terms(
            PROP,
            terms
                .into_iter()
                .map(|((a, b, t, q), n, d)| (Monomial::new(a, b, t, q), ratio(n, d))),
        )
    })
}

fn arb_nilpotent() -> impl Strategy<Value = TruncatedSeries> {
    arb_series().prop_map(|x| {
        let c = x.constant_term();
        x.sub(&TruncatedSeries::constant(PROP, c)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(x in arb_series(), y in arb_series(), z in arb_series()) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(
            x.mul(&y).unwrap().mul(&z).unwrap(),
            x.mul(&y.mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert!(x.add(&y).unwrap().terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn inversion_roundtrip(x in arb_nilpotent()) {
        let inv = TruncatedSeries::invert_one_minus(&x).unwrap();
        let one_minus = TruncatedSeries::one(PROP).sub(&x).unwrap();
        prop_assert_eq!(inv.mul(&one_minus).unwrap(), TruncatedSeries::one(PROP));
    }

    #[test]
    fn pochhammer_splices(n1 in 0u32..4, n2 in 0u32..4, off in 0i64..3, step in 1i64..3, c in -2i64..=2) {
        let pr = TruncationProfile::new(0, 3, 0, 12);
        let m = Monomial::b(1);
        let whole = pochhammer_finite(&int(c), m, off, step, n1 + n2, pr).unwrap();
        let head = pochhammer_finite(&int(c), m, off, step, n1, pr).unwrap();
        let tail = pochhammer_finite(&int(c), m, off + n1 as i64 * step, step, n2, pr).unwrap();
        prop_assert_eq!(whole, head.mul(&tail).unwrap());
    }

    #[test]
    fn substitution_is_multiplicative(x in arb_series(), y in arb_series(), k in 1u32..4) {
        let lhs = x.mul(&y).unwrap().substitute_q_power(k).unwrap();
        let rhs = x.substitute_q_power(k).unwrap().mul(&y.substitute_q_power(k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_is_involutive_homomorphism(x in arb_series(), y in arb_series()) {
        let sx = x.swap_b_t().unwrap();
        prop_assert_eq!(sx.swap_b_t().unwrap(), x.clone());
        prop_assert_eq!(
            x.mul(&y).unwrap().swap_b_t().unwrap(),
            sx.mul(&y.swap_b_t().unwrap()).unwrap()
        );
        prop_assert_eq!(
            x.add(&y).unwrap().swap_b_t().unwrap(),
            sx.add(&y.swap_b_t().unwrap()).unwrap()
        );
    }
}
