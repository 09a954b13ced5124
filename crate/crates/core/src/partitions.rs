//! Partitions, constrained enumeration and generating polynomials.
//!
//! Enumeration is the brute-force side of every combinatorial check, so it
//! shares no code with the series builders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identities::{Mode, ReportBuilder, Side, VerificationReport};
use crate::par;
use crate::rational::int;
use crate::series::{Monomial, TruncatedSeries, TruncationProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("parts must be positive")]
    ZeroPart,
    #[error("cannot parse partition {0:?}: expected comma-separated positive integers")]
    Parse(String),
    #[error("constraint set is unbounded: give a maximum weight, or a maximum part together with a length bound")]
    Unbounded,
}

/// Weakly decreasing positive parts. The empty partition has weight 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// `l(π)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `o(π)`.
    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|&&p| p % 2 == 1).count()
    }

    pub fn largest(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn is_odd_distinct(&self) -> bool {
        is_odd_distinct(self)
    }
}

/// True iff no odd value occurs twice.
pub fn is_odd_distinct(p: &Partition) -> bool {
    p.0.windows(2).all(|w| w[0] != w[1] || w[0] % 2 == 0)
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Weight first, then reverse lexicographic on the parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthBound {
    Exact(usize),
    AtMost(usize),
}

impl LengthBound {
    pub fn admits(&self, len: usize) -> bool {
        match *self {
            LengthBound::Exact(l) => len == l,
            LengthBound::AtMost(l) => len <= l,
        }
    }

    pub fn max(&self) -> usize {
        match *self {
            LengthBound::Exact(l) | LengthBound::AtMost(l) => l,
        }
    }
}

/// Constraints on an enumeration. Unset fields impose nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub min_weight: Option<u64>,
    pub max_weight: Option<u64>,
    pub min_part: Option<u32>,
    pub max_part: Option<u32>,
    pub length: Option<LengthBound>,
    pub odd_distinct: bool,
    /// Drop the empty partition even where the other bounds admit it.
    pub exclude_empty: bool,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn weight(self, w: u64) -> Self {
        self.weight_range(w, w)
    }

    pub fn weight_range(mut self, lo: u64, hi: u64) -> Self {
        self.min_weight = Some(lo);
        self.max_weight = Some(hi);
        self
    }

    pub fn max_weight(mut self, hi: u64) -> Self {
        self.max_weight = Some(hi);
        self
    }

    pub fn parts_in(mut self, lo: u32, hi: u32) -> Self {
        self.min_part = Some(lo);
        self.max_part = Some(hi);
        self
    }

    pub fn min_part(mut self, lo: u32) -> Self {
        self.min_part = Some(lo);
        self
    }

    pub fn max_part(mut self, hi: u32) -> Self {
        self.max_part = Some(hi);
        self
    }

    pub fn exact_length(mut self, l: usize) -> Self {
        self.length = Some(LengthBound::Exact(l));
        self
    }

    pub fn max_length(mut self, l: usize) -> Self {
        self.length = Some(LengthBound::AtMost(l));
        self
    }

    pub fn odd_distinct(mut self) -> Self {
        self.odd_distinct = true;
        self
    }

    pub fn exclude_empty(mut self, yes: bool) -> Self {
        self.exclude_empty = yes;
        self
    }

    pub fn is_bounded(&self) -> bool {
        self.max_weight.is_some() || (self.max_part.is_some() && self.length.is_some())
    }

    pub fn satisfied_by(&self, p: &Partition) -> bool {
        let w = p.weight();
        let lo = self.min_part.unwrap_or(1);
        self.min_weight.is_none_or(|m| w >= m)
            && self.max_weight.is_none_or(|m| w <= m)
            && p.parts().iter().all(|&x| x >= lo)
            && self.max_part.is_none_or(|m| p.largest().is_none_or(|x| x <= m))
            && self.length.is_none_or(|l| l.admits(p.len()))
            && (!self.odd_distinct || p.is_odd_distinct())
            && !(self.exclude_empty && p.is_empty())
    }
}

/// All partitions satisfying `c`, sorted canonically.
pub fn enumerate(c: &ConstraintSet) -> Result<Vec<Partition>, PartitionError> {
    if !c.is_bounded() {
        return Err(PartitionError::Unbounded);
    }
    let max_weight = c.max_weight.unwrap_or(u64::MAX);
    let max_len = c.length.map_or(usize::MAX, |l| l.max());
    let min_part = c.min_part.unwrap_or(1).max(1);
    let top = c
        .max_part
        .map_or(max_weight, |m| (m as u64).min(max_weight))
        .min(u32::MAX as u64) as u32;

    let mut out = Vec::new();
    if c.satisfied_by(&Partition::empty()) {
        out.push(Partition::empty());
    }
    if max_len > 0 && top >= min_part {
        let firsts: Vec<u32> = (min_part..=top).collect();
        let walker = Walker {
            c,
            max_weight,
            max_len,
            min_part,
        };
        for mut chunk in par::map_ordered(&firsts, |&first| {
            let mut found = Vec::new();
            let mut prefix = vec![first];
            walker.descend(&mut prefix, first as u64, &mut found);
            found
        }) {
            out.append(&mut chunk);
        }
    }
    out.sort();
    Ok(out)
}

struct Walker<'a> {
    c: &'a ConstraintSet,
    max_weight: u64,
    max_len: usize,
    min_part: u32,
}

impl Walker<'_> {
    fn descend(&self, prefix: &mut Vec<u32>, weight: u64, found: &mut Vec<Partition>) {
        if weight > self.max_weight {
            return;
        }
        let len = prefix.len();
        if let Some(LengthBound::Exact(l)) = self.c.length {
            let missing = l.saturating_sub(len) as u64;
            if weight + missing * self.min_part as u64 > self.max_weight {
                return;
            }
        }
        let p = Partition(prefix.clone());
        if self.c.satisfied_by(&p) {
            found.push(p);
        }
        if len == self.max_len {
            return;
        }
        let last = *prefix.last().expect("nonempty prefix");
        let room = self.max_weight - weight;
        let hi = (last as u64).min(room) as u32;
        for next in (self.min_part..=hi).rev() {
            if self.c.odd_distinct && next == last && next % 2 == 1 {
                continue;
            }
            prefix.push(next);
            self.descend(prefix, weight + next as u64, found);
            prefix.pop();
        }
    }
}

/// `Σ a^{o(π)} q^{|π|}` as counts keyed by `(o, |π|)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratingPolynomial {
    counts: BTreeMap<(usize, u64), u64>,
}

/// One `(o, w)` coefficient where two polynomials differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDifference {
    pub a: usize,
    pub q: u64,
    pub left: u64,
    pub right: u64,
}

impl PolyDifference {
    pub fn monomial(&self) -> String {
        monomial_text(self.a, self.q)
    }
}

fn monomial_text(a: usize, q: u64) -> String {
    let part = |v: &str, e: u64| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let s = [part("a", a as u64), part("q", q)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("·");
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

impl GeneratingPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, p: &Partition) {
        self.add_term(p.odd_count(), p.weight(), 1);
    }

    pub fn add_term(&mut self, o: usize, w: u64, count: u64) {
        if count > 0 {
            *self.counts.entry((o, w)).or_insert(0) += count;
        }
    }

    pub fn get(&self, o: usize, w: u64) -> u64 {
        self.counts.get(&(o, w)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, u64), u64)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }

    /// Differing coefficients ordered by `(q, a)`.
    pub fn diff(&self, other: &GeneratingPolynomial) -> Vec<PolyDifference> {
        let mut keys: Vec<(usize, u64)> = self.counts.keys().chain(other.counts.keys()).copied().collect();
        keys.sort_by_key(|&(o, w)| (w, o));
        keys.dedup();
        keys.into_iter()
            .filter_map(|(o, w)| {
                let (l, r) = (self.get(o, w), other.get(o, w));
                (l != r).then_some(PolyDifference {
                    a: o,
                    q: w,
                    left: l,
                    right: r,
                })
            })
            .collect()
    }
}

impl<'a> FromIterator<&'a Partition> for GeneratingPolynomial {
    fn from_iter<I: IntoIterator<Item = &'a Partition>>(iter: I) -> Self {
        let mut g = GeneratingPolynomial::new();
        for p in iter {
            g.add(p);
        }
        g
    }
}

impl fmt::Display for GeneratingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.counts.iter().collect();
        keys.sort_by_key(|((o, w), _)| (*w, *o));
        let terms: Vec<String> = keys
            .into_iter()
            .map(|(&(o, w), &c)| {
                let m = monomial_text(o, w);
                match (c, m.as_str()) {
                    (1, _) => m,
                    (_, "1") => c.to_string(),
                    _ => format!("{c}{m}"),
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    a: usize,
    q: u64,
    count: u64,
}

impl Serialize for GeneratingPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<PolyTerm> = self
            .counts
            .iter()
            .map(|(&(a, q), &count)| PolyTerm { a, q, count })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratingPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<PolyTerm>::deserialize(d)?;
        let mut g = GeneratingPolynomial::new();
        for t in terms {
            g.add_term(t.a, t.q, t.count);
        }
        Ok(g)
    }
}

/// Generating polynomial of `c` restricted to weights `≤ weight_cap`.
pub fn generating_polynomial(
    c: &ConstraintSet,
    weight_cap: u64,
) -> Result<GeneratingPolynomial, PartitionError> {
    let cap = c.max_weight.map_or(weight_cap, |m| m.min(weight_cap));
    let bounded = ConstraintSet {
        max_weight: Some(cap),
        ..c.clone()
    };
    Ok(enumerate(&bounded)?.iter().collect())
}

/// The `tⁿ` coefficient of the `q → q²` left side against enumeration of
/// odd-distinct partitions with parts in `[2n, 4n]`, read as
/// `a^{o} b^{l} q^{|π|}`. The `n = 0` window has no positive parts, so it is
/// compared with `1/(1 − b)` instead.
pub fn series_vs_enumeration_check(
    n: u32,
    profile: TruncationProfile,
) -> Result<VerificationReport, crate::identities::IdentityError> {
    let profile = TruncationProfile {
        t: profile.t.max(n),
        ..profile
    };
    let window = TruncationProfile { t: 0, ..profile };
    let mut report = ReportBuilder::named(&format!("partition_window_{n}"), Mode::Formal, window);
    let series = crate::identities::build_eq31_side(Side::Left, profile)?.t_slice(n);
    let oracle = if n == 0 {
        report.note("n = 0: compared with 1/(1 - b)");
        let one_minus_b = TruncatedSeries::one(window).sub(&TruncatedSeries::term(window, int(1), Monomial::b(1)))?;
        one_minus_b.reciprocal()?
    } else {
        let c = ConstraintSet::new()
            .parts_in(2 * n, 4 * n)
            .max_length(profile.b as usize)
            .max_weight(profile.q as u64)
            .odd_distinct();
        let parts = enumerate(&c).map_err(|e| {
            crate::identities::IdentityError::InvalidParameter(e.to_string())
        })?;
        report.note(format!(
            "{} partitions with parts in [{}, {}], length <= {}, weight <= {}",
            parts.len(),
            2 * n,
            4 * n,
            profile.b,
            profile.q
        ));
        TruncatedSeries::from_terms(
            window,
            parts.iter().map(|p| {
                (
                    Monomial::new(p.odd_count() as u32, p.len() as u32, 0, p.weight() as u32),
                    int(1),
                )
            }),
        )
    };
    report.check("t^n coefficient vs enumeration", &series, &oracle);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parts(v: &[Partition]) -> Vec<Vec<u32>> {
        v.iter().map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn odd_distinct_weight_five() {
        let got = enumerate(&ConstraintSet::new().weight(5).odd_distinct()).unwrap();
        assert_eq!(parts(&got), vec![vec![5], vec![4, 1], vec![3, 2], vec![2, 2, 1]]);
    }

    #[test]
    fn weight_zero_is_the_empty_partition() {
        let got = enumerate(&ConstraintSet::new().weight(0)).unwrap();
        assert_eq!(got, vec![Partition::empty()]);
    }

    #[test]
    fn box_domain_listing() {
        let c = ConstraintSet::new().exact_length(1).parts_in(4, 8).odd_distinct();
        let got = enumerate(&c).unwrap();
        assert_eq!(parts(&got), vec![vec![4], vec![5], vec![6], vec![7], vec![8]]);
        assert_eq!(
            generating_polynomial(&c, 100).unwrap().to_string(),
            "q^4 + a·q^5 + q^6 + a·q^7 + q^8"
        );
        let codomain = ConstraintSet::new().exact_length(2).parts_in(2, 4).odd_distinct();
        assert_eq!(
            parts(&enumerate(&codomain).unwrap()),
            vec![vec![2, 2], vec![3, 2], vec![4, 2], vec![4, 3], vec![4, 4]]
        );
        assert!(generating_polynomial(&c, 100)
            .unwrap()
            .diff(&generating_polynomial(&codomain, 100).unwrap())
            .is_empty());
    }

    #[test]
    fn empty_constraint_weight_cap_zero() {
        let g = generating_polynomial(&ConstraintSet::new(), 0).unwrap();
        assert_eq!(g.terms().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    }

    #[test]
    fn unbounded_is_an_error() {
        assert_eq!(
            enumerate(&ConstraintSet::new().max_part(4)),
            Err(PartitionError::Unbounded)
        );
        assert!(enumerate(&ConstraintSet::new().max_part(4).max_length(3)).is_ok());
    }

    #[test]
    fn odd_distinct_examples() {
        assert!(!"3,1,1".parse::<Partition>().unwrap().is_odd_distinct());
        assert!("20,13,12,12,10".parse::<Partition>().unwrap().is_odd_distinct());
        assert!(Partition::empty().is_odd_distinct());
    }

    #[test]
    fn text_format() {
        let p: Partition = "20,13,12,12,10".parse().unwrap();
        assert_eq!(p.to_string(), "20,13,12,12,10");
        assert_eq!(p.weight(), 67);
        assert_eq!(p.odd_count(), 1);
        assert_eq!((p.largest(), p.smallest()), (Some(20), Some(10)));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!("2.5".parse::<Partition>().is_err());
    }

    #[test]
    fn all_partition_counts() {
        // p(n) for n = 0..=15
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176];
        for (w, &count) in p.iter().enumerate() {
            assert_eq!(enumerate(&ConstraintSet::new().weight(w as u64)).unwrap().len(), count);
        }
    }

    #[test]
    fn odd_distinct_counts_match_product() {
        // ∏ (1 + q^{2k−1}) / (1 − q^{2k}) through q^40
        let cap = 40u32;
        let prof = TruncationProfile::q_only(cap);
        let mut prod = TruncatedSeries::one(prof);
        for k in 1..=cap {
            let e = 2 * k - 1;
            if e <= cap {
                let f = TruncatedSeries::one(prof).add(&TruncatedSeries::term(prof, int(1), Monomial::q(e))).unwrap();
                prod = prod.mul(&f).unwrap();
            }
            if 2 * k <= cap {
                let d = TruncatedSeries::one(prof).sub(&TruncatedSeries::term(prof, int(1), Monomial::q(2 * k))).unwrap();
                prod = prod.mul(&d.reciprocal().unwrap()).unwrap();
            }
        }
        let all = enumerate(&ConstraintSet::new().max_weight(cap as u64).odd_distinct()).unwrap();
        let mut counts = vec![0u64; cap as usize + 1];
        for p in &all {
            counts[p.weight() as usize] += 1;
        }
        for w in 0..=cap {
            assert_eq!(prod.coefficient(&Monomial::q(w)).unwrap(), int(counts[w as usize] as i64), "w={w}");
        }
    }

    #[test]
    fn windows_match_series() {
        for (n, q) in [(0, 8), (1, 8), (2, 16)] {
            let r = series_vs_enumeration_check(n, TruncationProfile::new(3, 4, 0, q)).unwrap();
            assert!(r.is_verified(), "{r}");
        }
    }

    #[test]
    fn serde_roundtrip() {
        let p: Partition = "4,3,3".parse().unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, "[4,3,3]");
        assert_eq!(serde_json::from_str::<Partition>(&j).unwrap(), p);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        let g = generating_polynomial(&ConstraintSet::new().weight(4), 4).unwrap();
        let back: GeneratingPolynomial = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    fn constraint() -> impl Strategy<Value = ConstraintSet> {
        (
            0u64..14,
            prop::option::of(1u32..5),
            prop::option::of(1u32..9),
            prop::option::of((any::<bool>(), 0usize..5)),
            any::<bool>(),
        )
            .prop_map(|(w, lo, hi, len, odd)| {
                let mut c = ConstraintSet::new().max_weight(w);
                c.min_part = lo;
                c.max_part = hi;
                c.length = len.map(|(exact, l)| {
                    if exact {
                        LengthBound::Exact(l)
                    } else {
                        LengthBound::AtMost(l)
                    }
                });
                c.odd_distinct = odd;
                c
            })
    }

    proptest! {
        #[test]
        fn enumeration_is_sorted_unique_and_sound(c in constraint()) {
            let got = enumerate(&c).unwrap();
            prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
            for p in &got {
                prop_assert!(c.satisfied_by(p));
            }
            // completeness against a filter over all partitions of bounded weight
            let all = enumerate(&ConstraintSet::new().max_weight(c.max_weight.unwrap())).unwrap();
            let filtered: Vec<_> = all.into_iter().filter(|p| c.satisfied_by(p)).collect();
            prop_assert_eq!(&got, &filtered);
            let g: GeneratingPolynomial = got.iter().collect();
            prop_assert_eq!(g.total(), got.len() as u64);
        }

        #[test]
        fn text_roundtrip(v in prop::collection::vec(1u32..30, 0..8)) {
            let p = Partition::from_unsorted(v).unwrap();
            prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        }
    }
}
