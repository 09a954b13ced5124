//! Infinite sums whose summands stop changing modulo the truncation ideal.
//!
//! When a parameter is a fixed rational `w`, a sum `Σ_k w^k g_k(q)` does not
//! gain q-order with `k`. If `g_k ≡ G` for every `k ≥ K` (true for the sums
//! here once all Pochhammer factors past `K` sit beyond the q-cap), the
//! tail is exactly `G · w^K / (1 − w)`.

use num_traits::One;

use super::{Result, SeriesError, TruncatedSeries, TruncationProfile};
use crate::par;
use crate::rational::{self, Rational};

/// `Σ_{k=first}^{∞} w^k g_k` where `g_k` is stable from `tail_start` on.
///
/// Stability is asserted at runtime by comparing `g_K` with `g_{K+1}`; a
/// difference means the caller's bound is wrong and is reported rather than
/// silently truncated. `w = 1` diverges and is rejected.
pub fn sum_with_geometric_tail<F>(
    weight: &Rational,
    first: u32,
    tail_start: u32,
    profile: TruncationProfile,
    term: F,
) -> Result<TruncatedSeries>
where
    F: Fn(u32) -> Result<TruncatedSeries> + Sync + Send,
{
    if weight.is_one() {
        return Err(SeriesError::Divergent(
            "summation weight equals 1; the geometric tail has no value".into(),
        ));
    }
    let tail_start = tail_start.max(first);
    let indices: Vec<u32> = (first..=tail_start + 1).collect();
    let terms = par::map_ordered(&indices, |&k| term(k));
    let terms: Vec<TruncatedSeries> = terms.into_iter().collect::<Result<_>>()?;
    let (head, stable) = terms.split_at(terms.len() - 2);
    if stable[0] != stable[1] {
        return Err(SeriesError::IndexBoundInsufficient(format!(
            "summand {tail_start} differs from summand {} at cap_q = {}",
            tail_start + 1,
            profile.q
        )));
    }
    let mut acc = TruncatedSeries::zero(profile);
    for (k, g) in indices.iter().zip(head) {
        acc = acc.add(&g.scale(&rational::pow(weight, *k as usize)))?;
    }
    let tail_weight = rational::pow(weight, tail_start as usize) / (Rational::one() - weight);
    acc.add(&stable[0].scale(&tail_weight))
}
