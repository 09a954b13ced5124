//! Truncated formal power series in `a, b, t, q` with exact rational
//! coefficients.
//!
//! Every computation happens in the quotient of `Q[[a,b,t,q]]` by the
//! monomial ideal of terms exceeding a [`TruncationProfile`]. Because that
//! ideal is spanned by monomials, ring operations in the quotient are exact:
//! a coefficient inside the profile never depends on a dropped term.
//!
//! `valid_to_q` tracks the q-degree up to which coefficients are guaranteed
//! to agree with the untruncated series. It only matters after
//! substitutions that move terms across the q-cap (see
//! [`TruncatedSeries::shift_a_by_q`]).

mod monomial;
mod pochhammer;
mod product;
mod tail;

pub use monomial::{Monomial, ParseMonomialError};
pub use pochhammer::{pochhammer_finite, pochhammer_infinite};
pub use product::{Factor, ProductTerm};
pub use tail::sum_with_geometric_tail;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

/// Per-variable degree caps. A monomial is kept iff every exponent is within
/// its cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationProfile {
    pub a: u32,
    pub b: u32,
    pub t: u32,
    pub q: u32,
}

impl TruncationProfile {
    pub const fn new(a: u32, b: u32, t: u32, q: u32) -> Self {
        TruncationProfile { a, b, t, q }
    }

    /// Profile for series in `q` alone (rational mode).
    pub const fn q_only(q: u32) -> Self {
        TruncationProfile { a: 0, b: 0, t: 0, q }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.a <= self.a && m.b <= self.b && m.t <= self.t && m.q <= self.q
    }

    /// Componentwise minimum; the region on which two profiles agree.
    pub fn meet(&self, other: &TruncationProfile) -> TruncationProfile {
        TruncationProfile {
            a: self.a.min(other.a),
            b: self.b.min(other.b),
            t: self.t.min(other.t),
            q: self.q.min(other.q),
        }
    }

    pub fn is_within(&self, other: &TruncationProfile) -> bool {
        self.a <= other.a && self.b <= other.b && self.t <= other.t && self.q <= other.q
    }

    fn total_degree(&self) -> u64 {
        self.a as u64 + self.b as u64 + self.t as u64 + self.q as u64
    }
}

impl fmt::Display for TruncationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a≤{}, b≤{}, t≤{}, q≤{})", self.a, self.b, self.t, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("profile mismatch: {0} vs {1}")]
    ProfileMismatch(TruncationProfile, TruncationProfile),
    #[error("cannot invert 1 - x: x has nonzero constant term {0}")]
    ConstantTerm(String),
    #[error("series has zero constant term and is not invertible")]
    NotInvertible,
    #[error("negative exponent: {0}")]
    NegativeExponent(String),
    #[error("non-truncating infinite product: {0}")]
    NonTruncating(String),
    #[error("b and t caps differ ({b} vs {t}); the b<->t swap needs equal caps")]
    AsymmetricCaps { b: u32, t: u32 },
    #[error("monomial {monomial} is outside profile {profile}")]
    OutsideProfile {
        monomial: Monomial,
        profile: TruncationProfile,
    },
    #[error("monomial {monomial} is beyond the validity region (valid to q^{valid_to_q})")]
    OutsideValidity { monomial: Monomial, valid_to_q: i64 },
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("divergent summation: {0}")]
    Divergent(String),
    #[error("summation bound insufficient: {0}")]
    IndexBoundInsufficient(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// A sparse truncated series. Terms are kept in canonical monomial order and
/// never store a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    profile: TruncationProfile,
    terms: BTreeMap<Monomial, Rational>,
    valid_to_q: i64,
}

impl TruncatedSeries {
    pub fn zero(profile: TruncationProfile) -> Self {
        TruncatedSeries {
            profile,
            terms: BTreeMap::new(),
            valid_to_q: profile.q as i64,
        }
    }

    pub fn one(profile: TruncationProfile) -> Self {
        Self::constant(profile, rational::one())
    }

    pub fn constant(profile: TruncationProfile, c: Rational) -> Self {
        Self::term(profile, c, Monomial::ONE)
    }

    /// `c·m`, or zero if `m` lies outside the profile.
    pub fn term(profile: TruncationProfile, c: Rational, m: Monomial) -> Self {
        let mut s = Self::zero(profile);
        if !c.is_zero() && profile.contains(&m) {
            s.terms.insert(m, c);
        }
        s
    }

    /// Builds a series from raw terms, merging duplicates and dropping
    /// anything outside the profile.
    pub fn from_terms<I>(profile: TruncationProfile, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Self::zero(profile);
        for (m, c) in terms {
            if profile.contains(&m) {
                s.accumulate(m, c);
            }
        }
        s.prune();
        s
    }

    pub fn profile(&self) -> TruncationProfile {
        self.profile
    }

    pub fn valid_to_q(&self) -> i64 {
        self.valid_to_q
    }

    /// Lowers the validity bound. Raising it is not allowed.
    pub fn with_valid_to_q(mut self, v: i64) -> Self {
        self.valid_to_q = self.valid_to_q.min(v);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Number of stored nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn check_profile(&self, other: &Self) -> Result<()> {
        if self.profile != other.profile {
            return Err(SeriesError::ProfileMismatch(self.profile, other.profile));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_profile(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        out.valid_to_q = self.valid_to_q.min(other.valid_to_q);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.profile).with_valid_to_q(self.valid_to_q);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out
    }

    /// Multiplies by the single term `c·m`, dropping what leaves the profile.
    pub fn mul_term(&self, c: &Rational, m: Monomial) -> Self {
        let mut out = Self::zero(self.profile).with_valid_to_q(self.valid_to_q);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            let p = *k * m;
            if self.profile.contains(&p) {
                out.terms.insert(p, v * c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_profile(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let cap_q = self.profile.q;
        for (m1, c1) in &small.terms {
            // `large` iterates in increasing q, so stop once q overflows.
            for (m2, c2) in &large.terms {
                if m1.q + m2.q > cap_q {
                    break;
                }
                let m = *m1 * *m2;
                if self.profile.contains(&m) {
                    let prod = c1 * c2;
                    match acc.get_mut(&m) {
                        Some(v) => *v += prod,
                        None => {
                            acc.insert(m, prod);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries {
            profile: self.profile,
            terms: acc,
            valid_to_q: self.valid_to_q.min(other.valid_to_q),
        })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one(self.profile).with_valid_to_q(self.valid_to_q);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Returns `Σ_{k≥0} xᵏ = 1/(1 − x)` for `x` without constant term.
    ///
    /// Every nonconstant monomial is nilpotent in the quotient ring (each
    /// variable is capped), so the geometric sum stops after at most
    /// `cap_a + cap_b + cap_t + cap_q` powers.
    pub fn invert_one_minus(x: &Self) -> Result<Self> {
        let c0 = x.constant_term();
        if !c0.is_zero() {
            return Err(SeriesError::ConstantTerm(c0.to_string()));
        }
        let mut result = Self::one(x.profile).with_valid_to_q(x.valid_to_q);
        let mut power = result.clone();
        for _ in 0..x.profile.total_degree() {
            power = power.mul(x)?;
            if power.is_zero() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        // s = c0·(1 − x) with x = 1 − s/c0
        let inv_c0 = c0.recip();
        let x = Self::one(self.profile).sub(&self.scale(&inv_c0))?;
        Ok(Self::invert_one_minus(&x)?.scale(&inv_c0))
    }

    /// Replaces `q` by `q^k`.
    ///
    /// Output degree `d` reads input degree `d/k`, so the result is valid to
    /// `k·v + (k − 1)` when the input is valid to `v`.
    pub fn substitute_q_power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(SeriesError::InvalidArgument(
                "q-power substitution needs k >= 1".into(),
            ));
        }
        let mut out = Self::zero(self.profile);
        for (m, c) in &self.terms {
            let q = m.q as u64 * k as u64;
            if q <= self.profile.q as u64 {
                out.terms.insert(Monomial { q: q as u32, ..*m }, c.clone());
            }
        }
        let k = k as i64;
        out.valid_to_q = (k * self.valid_to_q + (k - 1)).min(self.profile.q as i64);
        Ok(out)
    }

    /// Replaces `a` by `a·q^j`. Each monomial's q-exponent becomes
    /// `e_q + j·e_a`, which must stay nonnegative.
    ///
    /// For `j < 0`, a coefficient at output degree `d` may come from input
    /// degree up to `d + |j|·cap_a`, so validity drops by that amount.
    pub fn shift_a_by_q(&self, j: i64) -> Result<Self> {
        let mut out = Self::zero(self.profile);
        for (m, c) in &self.terms {
            let q = m.q as i64 + j * m.a as i64;
            if q < 0 {
                return Err(SeriesError::NegativeExponent(format!(
                    "a -> a·q^{j} maps {m} to q-exponent {q}"
                )));
            }
            if q <= self.profile.q as i64 {
                out.terms.insert(Monomial { q: q as u32, ..*m }, c.clone());
            }
        }
        out.valid_to_q = self.valid_to_q - (-j * self.profile.a as i64).max(0);
        Ok(out)
    }

    /// Exchanges the exponents of `b` and `t`.
    pub fn swap_b_t(&self) -> Result<Self> {
        if self.profile.b != self.profile.t {
            return Err(SeriesError::AsymmetricCaps {
                b: self.profile.b,
                t: self.profile.t,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.swap_b_t(), c.clone()))
            .collect();
        Ok(TruncatedSeries {
            profile: self.profile,
            terms,
            valid_to_q: self.valid_to_q,
        })
    }

    /// Coefficient of `m`; errors outside the profile or beyond `valid_to_q`.
    pub fn coefficient(&self, m: &Monomial) -> Result<Rational> {
        if !self.profile.contains(m) {
            return Err(SeriesError::OutsideProfile {
                monomial: *m,
                profile: self.profile,
            });
        }
        if m.q as i64 > self.valid_to_q {
            return Err(SeriesError::OutsideValidity {
                monomial: *m,
                valid_to_q: self.valid_to_q,
            });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    /// Re-truncates to a profile contained in the current one.
    pub fn truncate_to(&self, profile: TruncationProfile) -> Result<Self> {
        if !profile.is_within(&self.profile) {
            return Err(SeriesError::InvalidArgument(format!(
                "cannot widen {} to {}",
                self.profile, profile
            )));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| profile.contains(m))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Ok(TruncatedSeries {
            profile,
            terms,
            valid_to_q: self.valid_to_q.min(profile.q as i64),
        })
    }

    /// Terms whose `t`-exponent is `n`, with `t` removed.
    pub fn t_slice(&self, n: u32) -> Self {
        self.slice(|m| (m.t == n).then_some(Monomial { t: 0, ..*m }))
    }

    /// Terms whose `b`-exponent is `n`, with `b` removed.
    pub fn b_slice(&self, n: u32) -> Self {
        self.slice(|m| (m.b == n).then_some(Monomial { b: 0, ..*m }))
    }

    fn slice(&self, f: impl Fn(&Monomial) -> Option<Monomial>) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| f(m).map(|m| (m, c.clone())))
            .collect();
        TruncatedSeries {
            profile: self.profile,
            terms,
            valid_to_q: self.valid_to_q,
        }
    }

    /// Sums a sequence of series in order.
    pub fn sum<'a, I>(profile: TruncationProfile, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TruncatedSeries>,
    {
        let mut acc = Self::zero(profile);
        for s in items {
            acc = acc.add(s)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.pretty())?;
            } else {
                write!(f, "{abs}·{}", m.pretty())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
