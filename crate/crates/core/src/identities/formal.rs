//! Formal-mode sides: `a, b, t, q` all stay variables.
//!
//! Every infinite sum is cut where the summand's lowest degree in its
//! summation variable (or in `q`) leaves the profile, so each built side is
//! exact inside its profile.

use num_traits::One;

use super::report::{Mode, ReportBuilder, VerificationReport};
use super::{IdentityCase, IdentityError, Result};
use crate::par;
use crate::rational::{int, Rational};
use crate::series::{self, Monomial, ProductTerm, TruncatedSeries, TruncationProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Which variable plays `α` in `f(α, β)`; the other plays `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FRole {
    B,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm31 {
    Eq34,
    Eq35,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm31Side {
    Eq34Left,
    Eq34Right,
    Eq35Left,
    Eq35Right,
}

const AB: Monomial = Monomial::new(1, 1, 0, 0);
const AT: Monomial = Monomial::new(1, 0, 1, 0);

/// Expands the summands `range` in parallel and adds them in index order.
fn sum_terms<F>(profile: TruncationProfile, range: std::ops::RangeInclusive<u32>, term: F) -> Result<TruncatedSeries>
where
    F: Fn(u32) -> series::Result<TruncatedSeries> + Sync + Send,
{
    let indices: Vec<u32> = range.collect();
    let parts = par::map_ordered(&indices, |&n| term(n));
    let mut acc = TruncatedSeries::zero(profile);
    for p in parts {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

/// `Σ_n w^n (−a·w'·q^{n+1}; q)_n / (w'·q^n; q)_{n+1}` with the weight `w`
/// and the denominator variable `w'` being `t, b` (left) or `b, t` (right).
pub fn build_thm11_side(side: Side, profile: TruncationProfile) -> Result<TruncatedSeries> {
    let (weight, base, num_base, bound): (fn(u32) -> Monomial, _, _, _) = match side {
        Side::Left => (Monomial::t, Monomial::b(1), AB, profile.t),
        Side::Right => (Monomial::b, Monomial::t(1), AT, profile.b),
    };
    let minus_one = int(-1);
    let one = Rational::one();
    sum_terms(profile, 0..=bound, |n| {
        ProductTerm::new()
            .times_monomial(weight(n))
            .times_poch(&minus_one, num_base, n as i64 + 1, 1, n)
            .over_poch(&one, base, n as i64, 1, n + 1)
            .expand(profile)
    })
}

/// `f(α, β) = Σ_n βⁿ / (α qⁿ; q)_{n+1}`, the `x = q, y = q²` specialization.
pub fn build_f_series(alpha: FRole, profile: TruncationProfile) -> Result<TruncatedSeries> {
    let (alpha_m, beta, bound): (_, fn(u32) -> Monomial, _) = match alpha {
        FRole::B => (Monomial::b(1), Monomial::t, profile.t),
        FRole::T => (Monomial::t(1), Monomial::b, profile.b),
    };
    let one = Rational::one();
    sum_terms(profile, 0..=bound, |n| {
        ProductTerm::new()
            .times_monomial(beta(n))
            .over_poch(&one, alpha_m, n as i64, 1, n + 1)
            .expand(profile)
    })
}

/// `Σ_n tⁿ (−ab q^{2n+1}; q²)_n / (b q^{2n}; q²)_{n+1}` built directly
/// (left), and the same with `b ↔ t` (right).
pub fn build_eq31_side(side: Side, profile: TruncationProfile) -> Result<TruncatedSeries> {
    let (weight, base, num_base, bound): (fn(u32) -> Monomial, _, _, _) = match side {
        Side::Left => (Monomial::t, Monomial::b(1), AB, profile.t),
        Side::Right => (Monomial::b, Monomial::t(1), AT, profile.b),
    };
    let minus_one = int(-1);
    let one = Rational::one();
    sum_terms(profile, 0..=bound, |n| {
        let n64 = n as i64;
        ProductTerm::new()
            .times_monomial(weight(n))
            .times_poch(&minus_one, num_base, 2 * n64 + 1, 2, n)
            .over_poch(&one, base, 2 * n64, 2, n + 1)
            .expand(profile)
    })
}

/// Sides of the two closing identities, as series in `a, b, q`.
///
/// The left summands `1 − (…)_N/(…)_N` have q-order at least `N`, so
/// `N ≤ cap_q` suffices; the right summands carry `bⁿ`, so `n ≤ cap_b`.
pub fn build_thm31_side(which: Thm31Side, profile: TruncationProfile) -> Result<TruncatedSeries> {
    let one = Rational::one();
    let b = Monomial::b(1);
    match which {
        Thm31Side::Eq34Left => sum_terms(profile, 1..=profile.q, |n| {
            let ratio = ProductTerm::new()
                .times_poch(&one, AB, n as i64 + 1, 1, n)
                .over_poch(&one, b, n as i64, 1, n)
                .expand(profile)?;
            TruncatedSeries::one(profile).sub(&ratio)
        }),
        Thm31Side::Eq34Right => sum_terms(profile, 1..=profile.b, |n| {
            ProductTerm::new()
                .scaled(&int(-1))
                .times_monomial(Monomial::b(n))
                .times_poch(&one, Monomial::new(1, 0, 0, 0), n as i64 + 1, 1, n)
                .over_poch(&one, Monomial::ONE, n as i64, 1, n + 1)
                .expand(profile)
        }),
        Thm31Side::Eq35Left => sum_terms(profile, 1..=profile.q, |n| {
            let prod = series::pochhammer_finite(&one, b, n as i64 + 1, 1, n, profile)?;
            TruncatedSeries::one(profile).sub(&prod)
        }),
        Thm31Side::Eq35Right => sum_terms(profile, 1..=profile.b, |n| {
            // −(−b)ⁿ = (−1)^{n+1} bⁿ
            let sign = if n % 2 == 0 { int(-1) } else { int(1) };
            let pent = (n as u64 * (3 * n as u64 + 1) / 2).min(u32::MAX as u64) as u32;
            ProductTerm::new()
                .scaled(&sign)
                .times_monomial(Monomial::new(0, n, 0, pent))
                .over_poch(&one, Monomial::ONE, n as i64, 1, n + 1)
                .expand(profile)
        }),
    }
}

fn require_symmetric(profile: TruncationProfile) -> Result<()> {
    if profile.b != profile.t {
        return Err(IdentityError::Precondition(format!(
            "cap_b ({}) must equal cap_t ({})",
            profile.b, profile.t
        )));
    }
    Ok(())
}

/// Left side against the independently built right side, and against its
/// own `b ↔ t` image.
pub fn verify_thm11(profile: TruncationProfile) -> Result<VerificationReport> {
    require_symmetric(profile)?;
    let mut report = ReportBuilder::new(IdentityCase::Thm1_1, Mode::Formal, profile);
    let left = build_thm11_side(Side::Left, profile)?;
    let right = build_thm11_side(Side::Right, profile)?;
    report.note(format!(
        "left: n <= cap_t = {} summands; right: n <= cap_b = {} summands",
        profile.t, profile.b
    ));
    report.check("left vs right", &left, &right);
    report.check("left vs swap_b_t(left)", &left, &left.swap_b_t()?);
    Ok(report.finish())
}

/// `f(b, t) = f(t, b)` at `x = q, y = q²`.
pub fn verify_f_sym_formal(profile: TruncationProfile) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new(IdentityCase::FSym, Mode::Formal, profile);
    let fb = build_f_series(FRole::B, profile)?;
    let ft = build_f_series(FRole::T, profile)?;
    report.check("f(b,t) vs f(t,b)", &fb, &ft);
    Ok(report.finish())
}

/// The `a = 0` stratum of the main identity's left side against `f(b, t)`.
pub fn verify_reduction_a0(profile: TruncationProfile) -> Result<VerificationReport> {
    let profile = TruncationProfile { a: 0, ..profile };
    let mut report = ReportBuilder::new(IdentityCase::ReductionA0, Mode::Formal, profile);
    let left = build_thm11_side(Side::Left, profile)?;
    let fb = build_f_series(FRole::B, profile)?;
    report.check("thm1_1 left (cap_a = 0) vs f(b,t)", &left, &fb);
    let ft = build_f_series(FRole::T, profile)?;
    report.check("f(b,t) vs f(t,b)", &fb, &ft);
    Ok(report.finish())
}

/// Direct construction against `q → q², a → a·q⁻¹` applied to the main
/// identity's left side, built with `cap_q + cap_a` so the substituted
/// series is valid through `cap_q`.
pub fn verify_eq31(profile: TruncationProfile) -> Result<VerificationReport> {
    verify_eq31_with_input_cap(profile, profile.q + profile.a)
}

pub fn verify_eq31_with_input_cap(
    profile: TruncationProfile,
    input_cap_q: u32,
) -> Result<VerificationReport> {
    let required = profile.q + profile.a;
    if input_cap_q < required {
        return Err(IdentityError::Precondition(format!(
            "substitution path valid only to q^{} with input cap_q = {input_cap_q}; \
             need input cap_q >= {required}",
            input_cap_q as i64 - profile.a as i64
        )));
    }
    let mut report = ReportBuilder::new(IdentityCase::Eq31Consistency, Mode::Formal, profile);
    let direct = build_eq31_side(Side::Left, profile)?;
    let input_profile = TruncationProfile {
        q: input_cap_q,
        ..profile
    };
    let substituted = build_thm11_side(Side::Left, input_profile)?
        .substitute_q_power(2)?
        .shift_a_by_q(-1)?;
    report.note(format!(
        "substitution path built at cap_q = {input_cap_q}, valid through q^{}",
        substituted.valid_to_q()
    ));
    report.check("direct left vs substituted thm1_1 left", &direct, &substituted);
    let right = build_eq31_side(Side::Right, profile)?;
    if profile.b == profile.t {
        report.check("left vs right", &direct, &right);
        report.check("left vs swap_b_t(left)", &direct, &direct.swap_b_t()?);
    } else {
        report.note("cap_b != cap_t: symmetry checks skipped");
    }
    Ok(report.finish())
}

/// Adjudication: the report lists whatever mismatches exist.
pub fn verify_thm31(which: Thm31, profile: TruncationProfile) -> Result<VerificationReport> {
    let profile = TruncationProfile { t: 0, ..profile };
    let (case, l, r) = match which {
        Thm31::Eq34 => (IdentityCase::Thm34, Thm31Side::Eq34Left, Thm31Side::Eq34Right),
        Thm31::Eq35 => (IdentityCase::Thm35, Thm31Side::Eq35Left, Thm31Side::Eq35Right),
    };
    let mut report = ReportBuilder::new(case, Mode::Formal, profile);
    report.note(format!(
        "left: N <= cap_q = {} summands; right: n <= cap_b = {} summands",
        profile.q, profile.b
    ));
    let left = build_thm31_side(l, profile)?;
    let right = build_thm31_side(r, profile)?;
    report.check("left vs right", &left, &right);
    Ok(report.finish())
}
