//! `Γ` (subtract-and-mark), `σ` (2-modular conjugation) and the box audit.
//!
//! A box `(j, M)` pairs the domain `D(j, M)` of odd-distinct partitions with
//! parts in `[2M, 4M]` and `j` parts with the codomain `C(j, M)` of
//! odd-distinct partitions with parts in `[2j, 4j]` and `M` parts. The
//! at-most variant relaxes both lengths to `≤`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;
use crate::partitions::{
    enumerate, ConstraintSet, GeneratingPolynomial, Partition, PartitionError, PolyDifference,
};

/// Audit guard used when `QSID_ENUM_LIMIT` is unset.
pub const DEFAULT_ENUM_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("M must be at least 1")]
    ZeroMarker,
    #[error("box parameters must be positive (got j = {j}, M = {m})")]
    InvalidBox { j: u32, m: u32 },
    #[error("part {part} is below 2M = {marker}")]
    PartBelowMarker { part: u32, marker: u32 },
    #[error("odd part {0} is repeated")]
    RepeatedOddPart(u32),
    #[error("not in the image of gamma for j = {j}, M = {m}: {reason}")]
    NotInImage { j: u32, m: u32, reason: String },
    #[error("box too large: up to {estimate} partitions to enumerate, limit {limit} (set QSID_ENUM_LIMIT to raise it)")]
    TooLarge { estimate: u64, limit: u64 },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

pub type Result<T> = std::result::Result<T, BijectionError>;

fn first_repeated_odd(p: &Partition) -> Option<u32> {
    p.parts()
        .windows(2)
        .find(|w| w[0] == w[1] && w[0] % 2 == 1)
        .map(|w| w[0])
}

/// Removes `2M` from every part; the nonzero remainders and `l(p)` copies
/// of `2M` form the image.
pub fn gamma(p: &Partition, m: u32) -> Result<Partition> {
    if m == 0 {
        return Err(BijectionError::ZeroMarker);
    }
    if let Some(odd) = first_repeated_odd(p) {
        return Err(BijectionError::RepeatedOddPart(odd));
    }
    let marker = 2 * m;
    let mut parts = Vec::with_capacity(2 * p.len());
    for &x in p.parts() {
        if x < marker {
            return Err(BijectionError::PartBelowMarker { part: x, marker });
        }
        if x > marker {
            parts.push(x - marker);
        }
    }
    parts.extend(std::iter::repeat_n(marker, p.len()));
    Ok(Partition::from_unsorted(parts)?)
}

/// The length-`j` preimage of `lam` under [`gamma`].
pub fn gamma_inverse(lam: &Partition, j: u32, m: u32) -> Result<Partition> {
    if m == 0 {
        return Err(BijectionError::ZeroMarker);
    }
    let marker = 2 * m;
    let not_image = |reason: String| BijectionError::NotInImage { j, m, reason };
    if let Some(&big) = lam.parts().iter().find(|&&x| x > marker) {
        return Err(not_image(format!("part {big} exceeds 2M = {marker}")));
    }
    let markers = lam.parts().iter().filter(|&&x| x == marker).count();
    if markers < j as usize {
        return Err(not_image(format!(
            "{markers} parts equal to {marker}, need at least {j}"
        )));
    }
    // lam is decreasing, so the first j parts are the markers to remove
    let leftover = &lam.parts()[j as usize..];
    if leftover.len() > j as usize {
        return Err(not_image(format!(
            "{} remainders left for {j} parts",
            leftover.len()
        )));
    }
    let mut parts: Vec<u32> = leftover.iter().map(|r| marker + r).collect();
    parts.resize(j as usize, marker);
    let p = Partition::new(parts)?;
    if gamma(&p, m)? != *lam {
        return Err(not_image("preimage has a repeated odd part".into()));
    }
    Ok(p)
}

/// Column sums of the 2-modular diagram:
/// `σ(λ)_k = 2·#{λᵢ ≥ 2k} + #{λᵢ = 2k − 1}` for `k = 1..⌈λ₁/2⌉`.
pub fn two_modular_conjugate(lam: &Partition) -> Result<Partition> {
    if let Some(odd) = first_repeated_odd(lam) {
        return Err(BijectionError::RepeatedOddPart(odd));
    }
    let cols = lam.largest().map_or(0, |x| x.div_ceil(2));
    let parts = lam.parts();
    let out: Vec<u32> = (1..=cols)
        .map(|k| {
            let full = parts.partition_point(|&x| x >= 2 * k) as u32;
            let half = parts.iter().filter(|&&x| x == 2 * k - 1).count() as u32;
            2 * full + half
        })
        .collect();
    Ok(Partition::new(out)?)
}

/// `σ(Γ(p))`.
pub fn sigma_gamma(p: &Partition, m: u32) -> Result<Partition> {
    two_modular_conjugate(&gamma(p, m)?)
}

/// Ordinary (Ferrers) conjugate, used to cross-check `σ` on even partitions.
pub fn ordinary_conjugate(p: &Partition) -> Partition {
    let mut out = Vec::new();
    let mut k = 1;
    loop {
        let c = p.parts().iter().filter(|&&x| x >= k).count() as u32;
        if c == 0 {
            break;
        }
        out.push(c);
        k += 1;
    }
    Partition::new(out).expect("column counts decrease")
}

/// Result of testing a claimed image against the computed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub input: Partition,
    pub m: u32,
    pub computed: Partition,
    pub claimed: Partition,
    pub input_weight: u64,
    pub claimed_weight: u64,
    /// The claimed image has the input's weight.
    pub weight_consistent: bool,
    pub matches: bool,
}

pub fn check_claimed_image(p: &Partition, m: u32, claimed: &Partition) -> Result<ClaimCheck> {
    let computed = sigma_gamma(p, m)?;
    Ok(ClaimCheck {
        input: p.clone(),
        m,
        matches: computed == *claimed,
        computed,
        claimed: claimed.clone(),
        input_weight: p.weight(),
        claimed_weight: claimed.weight(),
        weight_consistent: p.weight() == claimed.weight(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthVariant {
    /// `l(π) = j` in the domain, `l(π) = M` in the codomain.
    Exact,
    /// `l(π) ≤ j` and `l(π) ≤ M`.
    AtMost,
}

/// Whether the empty partition meets `π_m ≥ 2M`, which it has no part to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyReading {
    /// Vacuously satisfied: the empty partition counts on both sides.
    Included,
    /// Undefined smallest part fails the bound on both sides.
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionBox {
    pub j: u32,
    #[serde(rename = "M")]
    pub m: u32,
}

impl BijectionBox {
    pub fn new(j: u32, m: u32) -> Result<Self> {
        if j == 0 || m == 0 {
            return Err(BijectionError::InvalidBox { j, m });
        }
        Ok(BijectionBox { j, m })
    }

    fn side(lo: u32, len: u32, variant: LengthVariant, empty: EmptyReading) -> ConstraintSet {
        let c = ConstraintSet::new()
            .parts_in(2 * lo, 4 * lo)
            .odd_distinct()
            .exclude_empty(empty == EmptyReading::Excluded);
        match variant {
            LengthVariant::Exact => c.exact_length(len as usize),
            LengthVariant::AtMost => c.max_length(len as usize),
        }
    }

    pub fn domain(&self, variant: LengthVariant, empty: EmptyReading) -> ConstraintSet {
        Self::side(self.m, self.j, variant, empty)
    }

    pub fn codomain(&self, variant: LengthVariant, empty: EmptyReading) -> ConstraintSet {
        Self::side(self.j, self.m, variant, empty)
    }

    /// Upper bound on `|D| + |C|` in the `≤` variant: multisets of at most
    /// `L` values from `2K + 1` choices number `C(2K + 1 + L, L)`.
    pub fn enumeration_estimate(&self) -> u64 {
        fn multisets(values: u64, len: u64) -> u64 {
            let mut acc: u128 = 1;
            for i in 1..=len as u128 {
                acc = acc * (values as u128 + i) / i;
                if acc > u64::MAX as u128 {
                    return u64::MAX;
                }
            }
            acc as u64
        }
        multisets(2 * self.m as u64 + 1, self.j as u64)
            .saturating_add(multisets(2 * self.j as u64 + 1, self.m as u64))
    }
}

impl fmt::Display for BijectionBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, M={})", self.j, self.m)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassCount {
    pub passed: u64,
    pub total: u64,
}

impl PassCount {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }

    fn record(&mut self, ok: bool) {
        self.total += 1;
        self.passed += ok as u64;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Weight,
    OddCount,
    Membership,
    StatisticExchange,
    GammaInverse,
    SigmaInvolution,
    MiddleBounds,
}

/// A domain element on which `property` failed, with its images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: Property,
    pub input: Partition,
    pub gamma: Partition,
    pub image: Partition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub image: Partition,
    pub preimages: Vec<Partition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyComparison {
    pub domain: GeneratingPolynomial,
    pub codomain: GeneratingPolynomial,
    pub equal: bool,
    /// `left` is the domain count, `right` the codomain count.
    pub differences: Vec<PolyDifference>,
}

impl PolyComparison {
    fn new(domain: GeneratingPolynomial, codomain: GeneratingPolynomial) -> Self {
        let differences = domain.diff(&codomain);
        PolyComparison {
            equal: differences.is_empty(),
            domain,
            codomain,
            differences,
        }
    }

    /// Differing monomials as text, e.g. `["q^2", "a·q^3"]`.
    pub fn difference_monomials(&self) -> Vec<String> {
        self.differences.iter().map(PolyDifference::monomial).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtMostVariant {
    pub empty_partition: EmptyReading,
    pub comparison: PolyComparison,
}

/// The middle sum over `Γ(D)`: bounds `l(λ) ≤ 2j`, `λ₁ ≤ 2M`, and its
/// generating polynomial against both outer sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleCheck {
    pub size: u64,
    pub bounds: PassCount,
    pub equals_domain: bool,
    pub equals_codomain: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub input: Partition,
    pub gamma: Partition,
    pub image: Partition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    #[serde(rename = "box")]
    pub bx: BijectionBox,
    pub domain_size: u64,
    pub codomain_size: u64,
    pub weight_preserved: PassCount,
    pub odd_count_preserved: PassCount,
    pub codomain_membership: PassCount,
    pub statistic_exchange: PassCount,
    pub gamma_inverse_roundtrip: PassCount,
    pub sigma_involution: PassCount,
    pub injective: bool,
    pub collisions: Vec<Collision>,
    pub surjective: bool,
    pub unhit: Vec<Partition>,
    pub counterexamples: Vec<Counterexample>,
    pub exact_variant: PolyComparison,
    pub at_most_variant: Vec<AtMostVariant>,
    pub middle: MiddleCheck,
    /// Reference inputs that fall inside the box, with their images.
    pub traces: Vec<Trace>,
}

/// Reference inputs traced whenever they lie in the audited domain.
pub const REFERENCE_INPUTS: [(&[u32], u32); 2] = [(&[20, 17, 13], 5), (&[20, 13, 12, 12, 10], 5)];

impl AuditReport {
    /// Every property held and `σ∘Γ` is a bijection `D → C`.
    pub fn bijection_confirmed(&self) -> bool {
        [
            self.weight_preserved,
            self.odd_count_preserved,
            self.codomain_membership,
            self.statistic_exchange,
            self.gamma_inverse_roundtrip,
            self.sigma_involution,
            self.middle.bounds,
        ]
        .iter()
        .all(PassCount::all_pass)
            && self.injective
            && self.surjective
            && self.exact_variant.equal
            && self.middle.equals_domain
            && self.middle.equals_codomain
    }

    /// Recomputes every listed counterexample, collision and unhit element
    /// from the raw maps. True when all of them reproduce.
    pub fn revalidate(&self) -> bool {
        let m = self.bx.m;
        let codomain = self.bx.codomain(LengthVariant::Exact, EmptyReading::Included);
        let counter_ok = self.counterexamples.iter().all(|c| {
            match (gamma(&c.input, m), sigma_gamma(&c.input, m)) {
                (Ok(g), Ok(img)) => {
                    g == c.gamma && img == c.image && !check_property(c.property, &c.input, &g, &img, self.bx, &codomain)
                }
                _ => false,
            }
        });
        let collisions_ok = self.collisions.iter().all(|col| {
            col.preimages.len() > 1
                && col
                    .preimages
                    .iter()
                    .all(|p| sigma_gamma(p, m).is_ok_and(|img| img == col.image))
        });
        let unhit_ok = self.unhit.is_empty() || {
            match enumerate(&self.bx.domain(LengthVariant::Exact, EmptyReading::Included)) {
                Ok(domain) => {
                    let images: Vec<Partition> =
                        domain.iter().filter_map(|p| sigma_gamma(p, m).ok()).collect();
                    self.unhit
                        .iter()
                        .all(|u| codomain.satisfied_by(u) && !images.contains(u))
                }
                Err(_) => false,
            }
        };
        counter_ok && collisions_ok && unhit_ok
    }
}

fn check_property(
    property: Property,
    p: &Partition,
    g: &Partition,
    img: &Partition,
    bx: BijectionBox,
    codomain: &ConstraintSet,
) -> bool {
    match property {
        Property::Weight => img.weight() == p.weight() && g.weight() == p.weight(),
        Property::OddCount => img.odd_count() == p.odd_count() && g.odd_count() == p.odd_count(),
        Property::Membership => codomain.satisfied_by(img),
        Property::StatisticExchange => {
            img.len() as u32 == g.largest().map_or(0, |x| x.div_ceil(2))
                && img.largest().map_or(0, |x| x.div_ceil(2)) as usize == g.len()
        }
        Property::GammaInverse => gamma_inverse(g, p.len() as u32, bx.m).is_ok_and(|q| q == *p),
        Property::SigmaInvolution => two_modular_conjugate(img).is_ok_and(|back| back == *g),
        Property::MiddleBounds => g.len() <= 2 * bx.j as usize && g.largest().is_none_or(|x| x <= 2 * bx.m),
    }
}

const PROPERTIES: [Property; 7] = [
    Property::Weight,
    Property::OddCount,
    Property::Membership,
    Property::StatisticExchange,
    Property::GammaInverse,
    Property::SigmaInvolution,
    Property::MiddleBounds,
];

/// Enumeration guard: `QSID_ENUM_LIMIT` if set and valid, else the default.
pub fn enum_limit() -> u64 {
    std::env::var("QSID_ENUM_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_LIMIT)
}

pub fn audit_bijection(bx: BijectionBox) -> Result<AuditReport> {
    audit_bijection_with_limit(bx, enum_limit())
}

pub fn audit_bijection_with_limit(bx: BijectionBox, limit: u64) -> Result<AuditReport> {
    let bx = BijectionBox::new(bx.j, bx.m)?;
    let estimate = bx.enumeration_estimate();
    if estimate > limit {
        return Err(BijectionError::TooLarge { estimate, limit });
    }
    let m = bx.m;
    let domain = enumerate(&bx.domain(LengthVariant::Exact, EmptyReading::Included))?;
    let codomain_c = bx.codomain(LengthVariant::Exact, EmptyReading::Included);
    let codomain = enumerate(&codomain_c)?;

    let per_element = par::map_ordered(&domain, |p| -> Result<(Partition, Partition, Vec<Property>)> {
        let g = gamma(p, m)?;
        let img = two_modular_conjugate(&g)?;
        let failed = PROPERTIES
            .iter()
            .copied()
            .filter(|&prop| !check_property(prop, p, &g, &img, bx, &codomain_c))
            .collect();
        Ok((g, img, failed))
    });

    let mut counts: BTreeMap<Property, PassCount> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut preimages: BTreeMap<Partition, Vec<Partition>> = BTreeMap::new();
    let mut middle_poly = GeneratingPolynomial::new();
    let mut traces = Vec::new();
    for (p, res) in domain.iter().zip(per_element) {
        let (g, img, failed) = res?;
        for prop in PROPERTIES {
            counts.entry(prop).or_default().record(!failed.contains(&prop));
        }
        for &prop in &failed {
            counterexamples.push(Counterexample {
                property: prop,
                input: p.clone(),
                gamma: g.clone(),
                image: img.clone(),
            });
        }
        middle_poly.add(&g);
        if REFERENCE_INPUTS
            .iter()
            .any(|(parts, rm)| *rm == m && p.parts() == *parts)
        {
            traces.push(Trace {
                input: p.clone(),
                gamma: g.clone(),
                image: img.clone(),
            });
        }
        preimages.entry(img).or_default().push(p.clone());
    }
    counterexamples.sort();

    let collisions: Vec<Collision> = preimages
        .iter()
        .filter(|(_, pre)| pre.len() > 1)
        .map(|(img, pre)| Collision {
            image: img.clone(),
            preimages: pre.clone(),
        })
        .collect();
    let unhit: Vec<Partition> = codomain
        .iter()
        .filter(|c| !preimages.contains_key(c))
        .cloned()
        .collect();

    let domain_poly: GeneratingPolynomial = domain.iter().collect();
    let codomain_poly: GeneratingPolynomial = codomain.iter().collect();
    let middle = MiddleCheck {
        size: domain.len() as u64,
        bounds: counts[&Property::MiddleBounds],
        equals_domain: middle_poly == domain_poly,
        equals_codomain: middle_poly == codomain_poly,
    };

    let mut at_most_variant = Vec::new();
    for reading in [EmptyReading::Included, EmptyReading::Excluded] {
        let d = enumerate(&bx.domain(LengthVariant::AtMost, reading))?;
        let c = enumerate(&bx.codomain(LengthVariant::AtMost, reading))?;
        at_most_variant.push(AtMostVariant {
            empty_partition: reading,
            comparison: PolyComparison::new(d.iter().collect(), c.iter().collect()),
        });
    }

    Ok(AuditReport {
        bx,
        domain_size: domain.len() as u64,
        codomain_size: codomain.len() as u64,
        weight_preserved: counts[&Property::Weight],
        odd_count_preserved: counts[&Property::OddCount],
        codomain_membership: counts[&Property::Membership],
        statistic_exchange: counts[&Property::StatisticExchange],
        gamma_inverse_roundtrip: counts[&Property::GammaInverse],
        sigma_involution: counts[&Property::SigmaInvolution],
        injective: collisions.is_empty(),
        collisions,
        surjective: unhit.is_empty(),
        unhit,
        counterexamples,
        exact_variant: PolyComparison::new(domain_poly, codomain_poly),
        at_most_variant,
        middle,
        traces,
    })
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pc = |c: &PassCount| format!("{}/{}", c.passed, c.total);
        writeln!(f, "box                 {}", self.bx)?;
        writeln!(f, "domain size         {}", self.domain_size)?;
        writeln!(f, "codomain size       {}", self.codomain_size)?;
        writeln!(f, "weight preserved    {}", pc(&self.weight_preserved))?;
        writeln!(f, "o preserved         {}", pc(&self.odd_count_preserved))?;
        writeln!(f, "in codomain         {}", pc(&self.codomain_membership))?;
        writeln!(f, "l <-> ceil(max/2)   {}", pc(&self.statistic_exchange))?;
        writeln!(f, "gamma inverse       {}", pc(&self.gamma_inverse_roundtrip))?;
        writeln!(f, "sigma involution    {}", pc(&self.sigma_involution))?;
        writeln!(
            f,
            "injective           {} ({} collisions)",
            self.injective,
            self.collisions.len()
        )?;
        writeln!(
            f,
            "surjective          {} ({} unhit)",
            self.surjective,
            self.unhit.len()
        )?;
        writeln!(
            f,
            "middle sum          bounds {}, = domain: {}, = codomain: {}",
            pc(&self.middle.bounds),
            self.middle.equals_domain,
            self.middle.equals_codomain
        )?;
        writeln!(f, "exact lengths       generating polynomials equal: {}", self.exact_variant.equal)?;
        for pv in &self.at_most_variant {
            let reading = match pv.empty_partition {
                EmptyReading::Included => "empty partition included",
                EmptyReading::Excluded => "empty partition excluded",
            };
            if pv.comparison.equal {
                writeln!(f, "lengths <=          {reading}: equal")?;
            } else {
                writeln!(
                    f,
                    "lengths <=          {reading}: differ at {{{}}}",
                    pv.comparison.difference_monomials().join(", ")
                )?;
            }
        }
        for t in &self.traces {
            writeln!(f, "trace               ({}) -> ({}) -> ({})", t.input, t.gamma, t.image)?;
        }
        for c in &self.counterexamples {
            writeln!(f, "counterexample      {:?}: ({}) -> ({})", c.property, c.input, c.image)?;
        }
        write!(
            f,
            "bijection           {}",
            if self.bijection_confirmed() { "confirmed" } else { "NOT confirmed" }
        )
    }
}
