//! q-Pochhammer products.
//!
//! Convention: `(x; q)_n` has exactly `n` factors,
//! `(1 − x)(1 − xq)···(1 − xq^{n−1})`, so `(x; q)_0 = 1`.

use num_traits::Zero;

use super::{Monomial, Result, SeriesError, TruncatedSeries, TruncationProfile};
use crate::rational::Rational;

/// `1 − c·m·q^e` as a series, with `e ≥ 0` already checked.
pub(crate) fn binomial_factor(
    c: &Rational,
    m: Monomial,
    e: u32,
    profile: TruncationProfile,
) -> TruncatedSeries {
    let one = TruncatedSeries::one(profile);
    if c.is_zero() {
        return one;
    }
    let x = TruncatedSeries::term(profile, c.clone(), m.with_q(m.q + e));
    one.sub(&x).expect("same profile")
}

/// `∏_{k=0}^{n−1} (1 − c·m·q^{q_offset + k·q_step})`.
///
/// `m` may itself carry a power of `q`; the offset is added on top.
pub fn pochhammer_finite(
    c: &Rational,
    m: Monomial,
    q_offset: i64,
    q_step: i64,
    n: u32,
    profile: TruncationProfile,
) -> Result<TruncatedSeries> {
    if q_step < 1 {
        return Err(SeriesError::InvalidArgument(format!(
            "q_step must be >= 1, got {q_step}"
        )));
    }
    let mut out = TruncatedSeries::one(profile);
    for k in 0..n as i64 {
        let e = m.q as i64 + q_offset + k * q_step;
        if e < 0 {
            return Err(SeriesError::NegativeExponent(format!(
                "factor {k} of ({c}·{}; q)_{n} has q-exponent {e}",
                m.with_q(0).pretty()
            )));
        }
        if e > profile.q as i64 || c.is_zero() {
            continue;
        }
        let f = binomial_factor(c, m.with_q(0), e as u32, profile);
        out = out.mul(&f)?;
    }
    Ok(out)
}

/// `∏_{k≥0} (1 − c·m·q^{q_offset + k·q_step})`, exact within the profile:
/// factors whose q-exponent exceeds `cap_q` are congruent to 1.
///
/// The first factor must already carry a positive power of `q` unless `m`
/// is a pure power of `q` (then `(1 − c)` is a scalar factor).
pub fn pochhammer_infinite(
    c: &Rational,
    m: Monomial,
    q_offset: i64,
    q_step: i64,
    profile: TruncationProfile,
) -> Result<TruncatedSeries> {
    if q_step < 1 {
        return Err(SeriesError::InvalidArgument(format!(
            "q_step must be >= 1, got {q_step}"
        )));
    }
    let e0 = m.q as i64 + q_offset;
    if e0 < 0 {
        return Err(SeriesError::NegativeExponent(format!(
            "first factor of infinite product has q-exponent {e0}"
        )));
    }
    if e0 == 0 && !m.is_pure_q() {
        return Err(SeriesError::NonTruncating(format!(
            "({c}·{}; q)_∞ needs q_offset >= 1",
            m.with_q(0).pretty()
        )));
    }
    let cap = profile.q as i64;
    let n = if e0 > cap {
        0
    } else {
        ((cap - e0) / q_step + 1) as u32
    };
    pochhammer_finite(c, m, q_offset, q_step, n, profile)
}
