//! Symbolic products of binomial factors, expanded on demand.
//!
//! A [`ProductTerm`] is `scalar · prefactor · q^shift · ∏ num / ∏ den` where
//! every factor is `1 − c·m·q^e`. Factors may carry a *negative* q-exponent
//! as long as `m` is parameter-free: expansion rewrites
//! `1 − c·q^{−k} = −c·q^{−k}·(1 − c⁻¹·q^k)` and folds the monomial into the
//! shift. The term is rejected only if the net q-order stays negative, so
//! terminating sums such as `(q^{−N}; q)_n / (q^{1−N}x; q)_n` evaluate
//! without a Laurent ring.

use std::fmt;

use num_traits::{One, Zero};

use super::pochhammer::{binomial_factor, pochhammer_infinite};
use super::{Monomial, Result, SeriesError, TruncatedSeries, TruncationProfile};
use crate::rational::Rational;

/// `1 − coeff·mono·q^q_exp`; `mono` carries no power of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub coeff: Rational,
    pub mono: Monomial,
    pub q_exp: i64,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - {}", self.coeff)?;
        if !self.mono.is_one() {
            write!(f, "·{}", self.mono.pretty())?;
        }
        if self.q_exp != 0 {
            write!(f, "·q^{}", self.q_exp)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
struct InfinitePoch {
    coeff: Rational,
    mono: Monomial,
    q_offset: i64,
    q_step: i64,
}

#[derive(Debug, Clone)]
pub struct ProductTerm {
    scalar: Rational,
    q_shift: i64,
    prefactor: Monomial,
    num: Vec<Factor>,
    den: Vec<Factor>,
    num_inf: Vec<InfinitePoch>,
    den_inf: Vec<InfinitePoch>,
}

impl Default for ProductTerm {
    fn default() -> Self {
        Self::new()
    }
}

impl ProductTerm {
    pub fn new() -> Self {
        ProductTerm {
            scalar: Rational::one(),
            q_shift: 0,
            prefactor: Monomial::ONE,
            num: Vec::new(),
            den: Vec::new(),
            num_inf: Vec::new(),
            den_inf: Vec::new(),
        }
    }

    pub fn scaled(mut self, k: &Rational) -> Self {
        self.scalar *= k;
        self
    }

    pub fn times_q(mut self, e: i64) -> Self {
        self.q_shift += e;
        self
    }

    pub fn times_monomial(mut self, m: Monomial) -> Self {
        self.q_shift += m.q as i64;
        self.prefactor = self.prefactor * m.with_q(0);
        self
    }

    pub fn times_factor(mut self, coeff: Rational, mono: Monomial, q_exp: i64) -> Self {
        self.num.push(Factor {
            coeff,
            mono: mono.with_q(0),
            q_exp: q_exp + mono.q as i64,
        });
        self
    }

    pub fn over_factor(mut self, coeff: Rational, mono: Monomial, q_exp: i64) -> Self {
        self.den.push(Factor {
            coeff,
            mono: mono.with_q(0),
            q_exp: q_exp + mono.q as i64,
        });
        self
    }

    fn poch_factors(
        coeff: &Rational,
        mono: Monomial,
        q_offset: i64,
        q_step: i64,
        n: u32,
    ) -> impl Iterator<Item = Factor> + '_ {
        let base = mono.q as i64 + q_offset;
        let m = mono.with_q(0);
        (0..n as i64).map(move |k| Factor {
            coeff: coeff.clone(),
            mono: m,
            q_exp: base + k * q_step,
        })
    }

    /// Multiplies by `(coeff·mono·q^{q_offset}; q^{q_step})_n`.
    pub fn times_poch(
        mut self,
        coeff: &Rational,
        mono: Monomial,
        q_offset: i64,
        q_step: i64,
        n: u32,
    ) -> Self {
        self.num
            .extend(Self::poch_factors(coeff, mono, q_offset, q_step, n));
        self
    }

    /// Divides by `(coeff·mono·q^{q_offset}; q^{q_step})_n`.
    pub fn over_poch(
        mut self,
        coeff: &Rational,
        mono: Monomial,
        q_offset: i64,
        q_step: i64,
        n: u32,
    ) -> Self {
        self.den
            .extend(Self::poch_factors(coeff, mono, q_offset, q_step, n));
        self
    }

    pub fn times_poch_inf(mut self, coeff: &Rational, mono: Monomial, q_offset: i64) -> Self {
        self.num_inf.push(InfinitePoch {
            coeff: coeff.clone(),
            mono,
            q_offset,
            q_step: 1,
        });
        self
    }

    pub fn over_poch_inf(mut self, coeff: &Rational, mono: Monomial, q_offset: i64) -> Self {
        self.den_inf.push(InfinitePoch {
            coeff: coeff.clone(),
            mono,
            q_offset,
            q_step: 1,
        });
        self
    }

    /// Expands the product into the given profile.
    pub fn expand(&self, profile: TruncationProfile) -> Result<TruncatedSeries> {
        let zero = TruncatedSeries::zero(profile);
        let mut scalar = self.scalar.clone();
        let mut shift = self.q_shift;
        let mut num = Vec::with_capacity(self.num.len());
        let mut den = Vec::with_capacity(self.den.len());

        for (is_num, f) in self
            .num
            .iter()
            .map(|f| (true, f))
            .chain(self.den.iter().map(|f| (false, f)))
        {
            if f.coeff.is_zero() {
                continue;
            }
            let f = if f.q_exp < 0 {
                if !f.mono.is_one() {
                    return Err(SeriesError::NegativeExponent(format!(
                        "factor {f} has a parameter at negative q-order"
                    )));
                }
                let lead = -f.coeff.clone();
                if is_num {
                    scalar *= &lead;
                    shift += f.q_exp;
                } else {
                    scalar /= &lead;
                    shift -= f.q_exp;
                }
                Factor {
                    coeff: f.coeff.recip(),
                    mono: Monomial::ONE,
                    q_exp: -f.q_exp,
                }
            } else {
                f.clone()
            };
            if f.q_exp == 0 && f.mono.is_one() {
                let value = Rational::one() - &f.coeff;
                if is_num {
                    if value.is_zero() {
                        return Ok(zero);
                    }
                    scalar *= value;
                } else {
                    if value.is_zero() {
                        return Err(SeriesError::ZeroDenominator(format!(
                            "denominator factor {f} vanishes"
                        )));
                    }
                    scalar /= value;
                }
                continue;
            }
            if is_num {
                num.push(f);
            } else {
                den.push(f);
            }
        }

        if scalar.is_zero() {
            return Ok(zero);
        }
        if shift < 0 {
            return Err(SeriesError::NegativeExponent(format!(
                "product term has net q-order {shift}"
            )));
        }
        let pre = self.prefactor;
        if shift > profile.q as i64 || pre.a > profile.a || pre.b > profile.b || pre.t > profile.t
        {
            return Ok(zero);
        }
        let inner = TruncationProfile {
            a: profile.a - pre.a,
            b: profile.b - pre.b,
            t: profile.t - pre.t,
            q: profile.q - shift as u32,
        };

        let mut acc = TruncatedSeries::constant(inner, scalar);
        for f in &num {
            if f.q_exp <= inner.q as i64 {
                acc = acc.mul(&binomial_factor(&f.coeff, f.mono, f.q_exp as u32, inner))?;
            }
        }
        for p in &self.num_inf {
            acc = acc.mul(&pochhammer_infinite(
                &p.coeff, p.mono, p.q_offset, p.q_step, inner,
            )?)?;
        }
        for f in &den {
            if f.q_exp > inner.q as i64 {
                continue;
            }
            let x = TruncatedSeries::term(inner, f.coeff.clone(), f.mono.with_q(f.q_exp as u32));
            acc = acc.mul(&TruncatedSeries::invert_one_minus(&x)?)?;
        }
        for p in &self.den_inf {
            let prod = pochhammer_infinite(&p.coeff, p.mono, p.q_offset, p.q_step, inner)?;
            let inv = prod.reciprocal().map_err(|_| {
                SeriesError::ZeroDenominator(format!(
                    "infinite product ({}·{}; q)_∞ has zero constant term",
                    p.coeff,
                    p.mono.pretty()
                ))
            })?;
            acc = acc.mul(&inv)?;
        }

        let lift = pre.with_q(shift as u32);
        Ok(TruncatedSeries::from_terms(
            profile,
            acc.terms().map(|(m, c)| (*m * lift, c.clone())),
        ))
    }
}
