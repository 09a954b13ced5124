//! Rational mode: parameters fixed at exact rationals, `q` formal.
//!
//! Two kinds of sums appear. Terminating sums (index bounded by `N`) are
//! evaluated term by term; `(q^{−N}; q)_n` and friends carry negative
//! q-exponents that [`ProductTerm`] normalizes away. Nonterminating sums
//! weighted by a rational power `wⁿ` gain no q-order, so their summands are
//! taken up to the index where they become constant modulo `q^{cap+1}`,
//! and the remainder is closed as a geometric series (see
//! [`sum_with_geometric_tail`]).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::report::{Mode, ReportBuilder, VerificationReport};
use super::{IdentityCase, IdentityError, Result};
use crate::par;
use crate::rational::{self, format_rational, Rational};
use crate::series::{
    sum_with_geometric_tail, Monomial, ProductTerm, TruncatedSeries, TruncationProfile,
};

/// Exact parameter values. Unused slots stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RationalAssignment {
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub c: Option<Rational>,
    pub t: Option<Rational>,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub n: Option<u32>,
    pub k1: Option<u32>,
    pub k2: Option<u32>,
}

macro_rules! need {
    ($name:ident, $field:ident, $label:literal, $ty:ty) => {
        pub fn $name(&self) -> Result<$ty> {
            self.$field
                .clone()
                .ok_or(IdentityError::MissingParameter($label))
        }
    };
}

impl RationalAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(a, b, c, N)` for the terminating summations.
    pub fn abcn(a: Rational, b: Rational, c: Rational, n: u32) -> Self {
        RationalAssignment {
            a: Some(a),
            b: Some(b),
            c: Some(c),
            n: Some(n),
            ..Self::default()
        }
    }

    pub fn abn(a: Rational, b: Rational, n: u32) -> Self {
        RationalAssignment {
            a: Some(a),
            b: Some(b),
            n: Some(n),
            ..Self::default()
        }
    }

    pub fn abt(a: Rational, b: Rational, t: Rational) -> Self {
        RationalAssignment {
            a: Some(a),
            b: Some(b),
            t: Some(t),
            ..Self::default()
        }
    }

    pub fn f_sym(alpha: Rational, beta: Rational, k1: u32, k2: u32) -> Self {
        RationalAssignment {
            alpha: Some(alpha),
            beta: Some(beta),
            k1: Some(k1),
            k2: Some(k2),
            ..Self::default()
        }
    }

    need!(need_a, a, "a", Rational);
    need!(need_b, b, "b", Rational);
    need!(need_c, c, "c", Rational);
    need!(need_t, t, "t", Rational);
    need!(need_alpha, alpha, "alpha", Rational);
    need!(need_beta, beta, "beta", Rational);
    need!(need_n, n, "N", u32);
    need!(need_k1, k1, "k1", u32);
    need!(need_k2, k2, "k2", u32);

    /// The set slots as canonical strings, for reports.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        for (k, v) in [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("t", &self.t),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
        ] {
            if let Some(v) = v {
                m.insert(k.to_string(), format_rational(v));
            }
        }
        for (k, v) in [("N", self.n), ("k1", self.k1), ("k2", self.k2)] {
            if let Some(v) = v {
                m.insert(k.to_string(), v.to_string());
            }
        }
        m
    }
}

/// Series expressions evaluable in rational mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalSide {
    /// `Σ_{n=0}^{N} (a)_n (b)_n (q^{−N})_n qⁿ / ((c)_n (q)_n (q^{1−N}ab/c)_n)`.
    QpsSum,
    /// `(c/a)_N (c/b)_N / ((c)_N (c/ab)_N)`.
    QpsProduct,
    /// `(q)_N/(c/ab)_N · Σ_n (a)_n (b)_n (c/ab)_{N−n} (c/ab)ⁿ / ((c)_n (q)_n (q)_{N−n})`;
    /// `with_q_power` multiplies each summand by an extra `qⁿ`.
    Rewrite { with_q_power: bool },
    /// `Σ_{n=0}^{N} (a)_n (q/a)_{N−n} (q/a)ⁿ / ((q)_n (q)_{N−n} (1 − bqⁿ))`.
    CbqSum,
    /// `(bq/a)_N / (b)_{N+1}`.
    CbqProduct,
    /// `Σ_N t^N (bq^{N+1}/a)_N / (bq^N)_{N+1}`.
    ChainStart,
    /// `Σ_N Σ_{n≤N} (a)_n (q/a)_{N−n} (q/a)ⁿ t^N / ((q)_n (1 − bq^{N+n}) (q)_{N−n})`.
    ChainDouble,
    /// The same sum after `N → N + n`.
    ChainShifted,
    /// `(tq/a)_∞/(t)_∞ · Σ_n (t)_n/(tq/a)_n bⁿ (tq^{2n+1})_∞/(tq^{2n+1}/a)_∞`.
    ChainFine,
    /// `Σ_n (x·q^{n+1})_n bⁿ / (tqⁿ)_{n+1}` with `x = t/a`, or `x = at` when `a_times_t`.
    ChainFinal { a_times_t: bool },
    /// `f(α, β)` at `x = q^{k1}, y = q^{k2}`; `swapped` gives `f(β, α)`.
    FSym { swapped: bool },
}

fn nonzero(name: &str, v: &Rational) -> Result<()> {
    if v.is_zero() {
        return Err(IdentityError::InvalidParameter(format!(
            "{name} must be nonzero (it appears in a denominator)"
        )));
    }
    Ok(())
}

fn terminating_sum<F>(cap_q: u32, last: u32, term: F) -> Result<TruncatedSeries>
where
    F: Fn(u32) -> crate::series::Result<TruncatedSeries> + Sync + Send,
{
    let profile = TruncationProfile::q_only(cap_q);
    let idx: Vec<u32> = (0..=last).collect();
    let mut acc = TruncatedSeries::zero(profile);
    for s in par::map_ordered(&idx, |&n| term(n)) {
        acc = acc.add(&s?)?;
    }
    Ok(acc)
}

/// Evaluates `side` at `assign` as a series in `q` through `q^{cap_q}`.
pub fn rational_series_eval(
    side: RationalSide,
    assign: &RationalAssignment,
    cap_q: u32,
) -> Result<TruncatedSeries> {
    let profile = TruncationProfile::q_only(cap_q);
    let one = Rational::one();
    let m1 = Monomial::ONE;
    match side {
        RationalSide::QpsSum => {
            let (a, b, c, big_n) = (assign.need_a()?, assign.need_b()?, assign.need_c()?, assign.need_n()?);
            nonzero("c", &c)?;
            let abc = &a * &b / &c;
            let nn = big_n as i64;
            terminating_sum(cap_q, big_n, |n| {
                ProductTerm::new()
                    .times_poch(&a, m1, 0, 1, n)
                    .times_poch(&b, m1, 0, 1, n)
                    .times_poch(&one, m1, -nn, 1, n)
                    .times_q(n as i64)
                    .over_poch(&c, m1, 0, 1, n)
                    .over_poch(&one, m1, 1, 1, n)
                    .over_poch(&abc, m1, 1 - nn, 1, n)
                    .expand(profile)
            })
        }
        RationalSide::QpsProduct => {
            let (a, b, c, big_n) = (assign.need_a()?, assign.need_b()?, assign.need_c()?, assign.need_n()?);
            nonzero("a", &a)?;
            nonzero("b", &b)?;
            Ok(ProductTerm::new()
                .times_poch(&(&c / &a), m1, 0, 1, big_n)
                .times_poch(&(&c / &b), m1, 0, 1, big_n)
                .over_poch(&c, m1, 0, 1, big_n)
                .over_poch(&(&c / (&a * &b)), m1, 0, 1, big_n)
                .expand(profile)?)
        }
        RationalSide::Rewrite { with_q_power } => {
            let (a, b, c, big_n) = (assign.need_a()?, assign.need_b()?, assign.need_c()?, assign.need_n()?);
            nonzero("a", &a)?;
            nonzero("b", &b)?;
            let x = &c / (&a * &b);
            let sum = terminating_sum(cap_q, big_n, |n| {
                ProductTerm::new()
                    .times_poch(&a, m1, 0, 1, n)
                    .times_poch(&b, m1, 0, 1, n)
                    .times_poch(&x, m1, 0, 1, big_n - n)
                    .scaled(&rational::pow(&x, n as usize))
                    .times_q(if with_q_power { n as i64 } else { 0 })
                    .over_poch(&c, m1, 0, 1, n)
                    .over_poch(&one, m1, 1, 1, n)
                    .over_poch(&one, m1, 1, 1, big_n - n)
                    .expand(profile)
            })?;
            let pre = ProductTerm::new()
                .times_poch(&one, m1, 1, 1, big_n)
                .over_poch(&x, m1, 0, 1, big_n)
                .expand(profile)?;
            Ok(pre.mul(&sum)?)
        }
        RationalSide::CbqSum => {
            let (a, b, big_n) = (assign.need_a()?, assign.need_b()?, assign.need_n()?);
            nonzero("a", &a)?;
            let inv_a = a.recip();
            terminating_sum(cap_q, big_n, |n| {
                ProductTerm::new()
                    .times_poch(&a, m1, 0, 1, n)
                    .times_poch(&inv_a, m1, 1, 1, big_n - n)
                    .scaled(&rational::pow(&inv_a, n as usize))
                    .times_q(n as i64)
                    .over_poch(&one, m1, 1, 1, n)
                    .over_poch(&one, m1, 1, 1, big_n - n)
                    .over_factor(b.clone(), m1, n as i64)
                    .expand(profile)
            })
        }
        RationalSide::CbqProduct => {
            let (a, b, big_n) = (assign.need_a()?, assign.need_b()?, assign.need_n()?);
            nonzero("a", &a)?;
            Ok(ProductTerm::new()
                .times_poch(&(&b / &a), m1, 1, 1, big_n)
                .over_poch(&b, m1, 0, 1, big_n + 1)
                .expand(profile)?)
        }
        RationalSide::ChainStart => {
            let (a, b, t) = chain_params(assign)?;
            let b_over_a = &b / &a;
            // summand ≡ 1 once N > cap_q
            Ok(sum_with_geometric_tail(&t, 0, cap_q + 1, profile, |big_n| {
                let nn = big_n as i64;
                ProductTerm::new()
                    .times_poch(&b_over_a, m1, nn + 1, 1, big_n)
                    .over_poch(&b, m1, nn, 1, big_n + 1)
                    .expand(profile)
            })?)
        }
        RationalSide::ChainDouble => {
            let (a, b, t) = chain_params(assign)?;
            let inv_a = a.recip();
            // (q/a)ⁿ bounds n by cap_q; for fixed n the N-summand is constant
            // once N − n ≥ cap_q and N + n > cap_q.
            let outer: Vec<u32> = (0..=cap_q).collect();
            let parts = par::map_ordered(&outer, |&n| -> Result<TruncatedSeries> {
                let pre = ProductTerm::new()
                    .times_poch(&a, m1, 0, 1, n)
                    .scaled(&rational::pow(&inv_a, n as usize))
                    .times_q(n as i64)
                    .over_poch(&one, m1, 1, 1, n)
                    .expand(profile)?;
                if pre.is_zero() {
                    return Ok(pre);
                }
                let inner = sum_with_geometric_tail(&t, n, n + cap_q + 1, profile, |big_n| {
                    let k = big_n - n;
                    ProductTerm::new()
                        .times_poch(&inv_a, m1, 1, 1, k)
                        .over_poch(&one, m1, 1, 1, k)
                        .over_factor(b.clone(), m1, (big_n + n) as i64)
                        .expand(profile)
                })?;
                Ok(pre.mul(&inner)?)
            });
            sum_ordered(profile, parts)
        }
        RationalSide::ChainShifted => {
            let (a, b, t) = chain_params(assign)?;
            let inv_a = a.recip();
            let outer: Vec<u32> = (0..=cap_q).collect();
            let parts = par::map_ordered(&outer, |&n| -> Result<TruncatedSeries> {
                let pre = ProductTerm::new()
                    .times_poch(&a, m1, 0, 1, n)
                    .scaled(&(rational::pow(&inv_a, n as usize) * rational::pow(&t, n as usize)))
                    .times_q(n as i64)
                    .over_poch(&one, m1, 1, 1, n)
                    .expand(profile)?;
                if pre.is_zero() {
                    return Ok(pre);
                }
                let inner = sum_with_geometric_tail(&t, 0, cap_q + 1, profile, |big_n| {
                    ProductTerm::new()
                        .times_poch(&inv_a, m1, 1, 1, big_n)
                        .over_poch(&one, m1, 1, 1, big_n)
                        .over_factor(b.clone(), m1, (big_n + 2 * n) as i64)
                        .expand(profile)
                })?;
                Ok(pre.mul(&inner)?)
            });
            sum_ordered(profile, parts)
        }
        RationalSide::ChainFine => {
            let (a, b, t) = chain_params(assign)?;
            let t_over_a = &t / &a;
            let prefactor = ProductTerm::new()
                .times_poch_inf(&t_over_a, m1, 1)
                .over_poch_inf(&t, m1, 0)
                .expand(profile)?;
            let sum = sum_with_geometric_tail(&b, 0, cap_q + 1, profile, |n| {
                let start = 2 * n as i64 + 1;
                ProductTerm::new()
                    .times_poch(&t, m1, 0, 1, n)
                    .over_poch(&t_over_a, m1, 1, 1, n)
                    .times_poch_inf(&t, m1, start)
                    .over_poch_inf(&t_over_a, m1, start)
                    .expand(profile)
            })?;
            Ok(prefactor.mul(&sum)?)
        }
        RationalSide::ChainFinal { a_times_t } => {
            let (a, b, t) = chain_params(assign)?;
            let x = if a_times_t { &a * &t } else { &t / &a };
            Ok(sum_with_geometric_tail(&b, 0, cap_q + 1, profile, |n| {
                ProductTerm::new()
                    .times_poch(&x, m1, n as i64 + 1, 1, n)
                    .over_poch(&t, m1, n as i64, 1, n + 1)
                    .expand(profile)
            })?)
        }
        RationalSide::FSym { swapped } => {
            let (mut alpha, mut beta) = (assign.need_alpha()?, assign.need_beta()?);
            let (k1, k2) = (assign.need_k1()?, assign.need_k2()?);
            if k1 == 0 || k2 == 0 {
                return Err(IdentityError::InvalidParameter(
                    "x = q^k1 and y = q^k2 need k1, k2 >= 1".into(),
                ));
            }
            if swapped {
                std::mem::swap(&mut alpha, &mut beta);
            }
            // every factor of summand n has q-order >= n·min(k1, k2)
            let tail_start = cap_q / k1.min(k2) + 1;
            Ok(sum_with_geometric_tail(&beta, 0, tail_start, profile, |n| {
                (0..=n)
                    .fold(ProductTerm::new(), |p, i| {
                        let e = k1 as i64 * (n - i) as i64 + k2 as i64 * i as i64;
                        p.over_factor(alpha.clone(), m1, e)
                    })
                    .expand(profile)
            })?)
        }
    }
}

fn sum_ordered(
    profile: TruncationProfile,
    parts: Vec<Result<TruncatedSeries>>,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(profile);
    for p in parts {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

fn chain_params(assign: &RationalAssignment) -> Result<(Rational, Rational, Rational)> {
    let (a, b, t) = (assign.need_a()?, assign.need_b()?, assign.need_t()?);
    nonzero("a", &a)?;
    Ok((a, b, t))
}

fn rational_report(case: IdentityCase, assign: &RationalAssignment, cap_q: u32) -> ReportBuilder {
    ReportBuilder::new(case, Mode::Rational, TruncationProfile::q_only(cap_q))
        .assignment(assign.to_map())
}

/// Terminating q-Pfaff–Saalschütz sum against its product, all subscripts `N`.
pub fn verify_qps(assign: &RationalAssignment, cap_q: u32) -> Result<VerificationReport> {
    let mut report = rational_report(IdentityCase::Qps21, assign, cap_q);
    let lhs = rational_series_eval(RationalSide::QpsSum, assign, cap_q)?;
    let rhs = rational_series_eval(RationalSide::QpsProduct, assign, cap_q)?;
    report.note("sum terminates at n = N through (q^-N; q)_n");
    report.note("product side normalized to (c/a)_N (c/b)_N / ((c)_N (c/ab)_N)");
    report.check("sum vs product", &lhs, &rhs);
    Ok(report.finish())
}

/// The rewritten summation against the original terminating sum. The
/// display with an extra `qⁿ` in the summand is evaluated too and its
/// outcome recorded as a note.
pub fn verify_eq22(assign: &RationalAssignment, cap_q: u32) -> Result<VerificationReport> {
    let mut report = rational_report(IdentityCase::Rewrite22, assign, cap_q);
    let lhs = rational_series_eval(RationalSide::QpsSum, assign, cap_q)?;
    let rewritten = rational_series_eval(RationalSide::Rewrite { with_q_power: false }, assign, cap_q)?;
    report.check("sum vs rewrite", &lhs, &rewritten);
    let variant = rational_series_eval(RationalSide::Rewrite { with_q_power: true }, assign, cap_q)?;
    let n = super::compare(&lhs, &variant).len();
    report.note(if n == 0 {
        "variant with extra q^n in the summand: also equal".to_string()
    } else {
        format!("variant with extra q^n in the summand: differs at {n} coefficients (not used)")
    });
    Ok(report.finish())
}

pub fn verify_eq23(assign: &RationalAssignment, cap_q: u32) -> Result<VerificationReport> {
    let mut report = rational_report(IdentityCase::Eq23, assign, cap_q);
    let lhs = rational_series_eval(RationalSide::CbqSum, assign, cap_q)?;
    let rhs = rational_series_eval(RationalSide::CbqProduct, assign, cap_q)?;
    report.check("sum vs (bq/a)_N/(b)_{N+1}", &lhs, &rhs);
    Ok(report.finish())
}

/// Successive displays of the analytic derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainStep {
    /// Starting sum against the double sum obtained from the `c = bq` case.
    Start,
    /// Double sum against its `N → N + n` re-indexing.
    Shift,
    /// Re-indexed sum against the infinite-product display.
    Fine,
    /// Infinite-product display against the final single sum.
    Final,
}

pub fn verify_chain(
    step: ChainStep,
    assign: &RationalAssignment,
    cap_q: u32,
) -> Result<VerificationReport> {
    let case = match step {
        ChainStep::Start => IdentityCase::ChainStart,
        ChainStep::Shift => IdentityCase::ChainShift,
        ChainStep::Fine => IdentityCase::ChainFine,
        ChainStep::Final => IdentityCase::ChainFinal,
    };
    let mut report = rational_report(case, assign, cap_q);
    let eval = |side| rational_series_eval(side, assign, cap_q);
    let (label, lhs, rhs) = match step {
        ChainStep::Start => (
            "start vs double sum",
            eval(RationalSide::ChainStart)?,
            eval(RationalSide::ChainDouble)?,
        ),
        ChainStep::Shift => (
            "double sum vs shifted double sum",
            eval(RationalSide::ChainDouble)?,
            eval(RationalSide::ChainShifted)?,
        ),
        ChainStep::Fine => (
            "shifted double sum vs product display",
            eval(RationalSide::ChainShifted)?,
            eval(RationalSide::ChainFine)?,
        ),
        ChainStep::Final => (
            "product display vs final sum with (tq^{n+1}/a)_n",
            eval(RationalSide::ChainFine)?,
            eval(RationalSide::ChainFinal { a_times_t: false })?,
        ),
    };
    report.note(chain_bounds_note(step, cap_q));
    report.check(label, &lhs, &rhs);
    if step == ChainStep::Final {
        let variant = eval(RationalSide::ChainFinal { a_times_t: true })?;
        let n = super::compare(&lhs, &variant).len();
        report.note(if n == 0 {
            "variant with (atq^{n+1})_n: also equal".to_string()
        } else {
            format!("variant with (atq^{{n+1}})_n: differs at {n} coefficients (not used)")
        });
    }
    Ok(report.finish())
}

fn chain_bounds_note(step: ChainStep, cap_q: u32) -> String {
    let k = cap_q + 1;
    match step {
        ChainStep::Start => format!("N-sum: N < {k} explicit, tail from N = {k} geometric in t"),
        ChainStep::Shift => format!(
            "double sum: n <= {cap_q} (q-order of (q/a)^n); for each n, N < n+{k} explicit, \
             tail geometric in t. shifted: n <= {cap_q}, N < {k} explicit, tail geometric in t"
        ),
        ChainStep::Fine => format!(
            "shifted: n <= {cap_q}, N < {k} explicit, tail geometric in t; \
             product display: n < {k} explicit, tail geometric in b"
        ),
        ChainStep::Final => format!("both b-sums: n < {k} explicit, tail geometric in b"),
    }
}

/// `f(α, β)` against `f(β, α)` with `x = q^{k1}`, `y = q^{k2}`.
pub fn verify_f_sym_rational(
    alpha: &Rational,
    beta: &Rational,
    k1: u32,
    k2: u32,
    cap_q: u32,
) -> Result<VerificationReport> {
    let assign = RationalAssignment::f_sym(alpha.clone(), beta.clone(), k1, k2);
    let mut report = rational_report(IdentityCase::FSym, &assign, cap_q);
    let lhs = rational_series_eval(RationalSide::FSym { swapped: false }, &assign, cap_q)?;
    let rhs = rational_series_eval(RationalSide::FSym { swapped: true }, &assign, cap_q)?;
    let tail = cap_q / k1.min(k2).max(1) + 1;
    report.note(format!(
        "n < {tail} explicit, tail geometric in the second argument"
    ));
    report.check("f(alpha,beta) vs f(beta,alpha)", &lhs, &rhs);
    Ok(report.finish())
}
