use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::IdentityCase;
use crate::rational::{self, Rational};
use crate::series::{Monomial, TruncatedSeries, TruncationProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Formal,
    Rational,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Formal => "formal",
            Mode::Rational => "rational",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "formal" => Ok(Mode::Formal),
            "rational" => Ok(Mode::Rational),
            _ => Err(format!("unknown mode {s:?} (expected formal or rational)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub monomial: Monomial,
    #[serde(with = "rational::as_string")]
    pub lhs: Rational,
    #[serde(with = "rational::as_string")]
    pub rhs: Rational,
}

/// Run metadata excluded from reproducibility comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Volatile {
    pub duration_ms: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub mode: Mode,
    pub caps: TruncationProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, String>>,
    pub status: Status,
    pub mismatches: Vec<Mismatch>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub volatile: Volatile,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    /// The report with its volatile section cleared.
    pub fn stable(&self) -> VerificationReport {
        VerificationReport {
            volatile: Volatile::default(),
            ..self.clone()
        }
    }

    /// A report for a run that failed before any comparison.
    pub fn error(
        case: &str,
        mode: Mode,
        caps: TruncationProfile,
        message: String,
    ) -> VerificationReport {
        VerificationReport {
            case: case.to_string(),
            mode,
            caps,
            assignment: None,
            status: Status::Error,
            mismatches: Vec::new(),
            notes: vec![message],
            volatile: Volatile {
                duration_ms: 0,
                version: env!("CARGO_PKG_VERSION").into(),
            },
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Verified => "verified",
            Status::Mismatch => "MISMATCH",
            Status::Error => "ERROR",
        };
        writeln!(f, "case      {} ({})", self.case, self.mode)?;
        writeln!(f, "caps      {}", self.caps)?;
        if let Some(a) = &self.assignment {
            let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "params    {}", parts.join(", "))?;
        }
        writeln!(f, "status    {status}")?;
        for n in &self.notes {
            writeln!(f, "note      {n}")?;
        }
        if !self.mismatches.is_empty() {
            writeln!(f, "mismatches ({}):", self.mismatches.len())?;
            writeln!(f, "  {:<16} {:>20} {:>20}", "monomial", "lhs", "rhs")?;
            for m in &self.mismatches {
                writeln!(f, "  {:<16} {:>20} {:>20}", m.monomial.to_string(), m.lhs, m.rhs)?;
            }
        }
        write!(f, "time      {} ms", self.volatile.duration_ms)
    }
}

/// Coefficient-wise comparison on the joint region: the meet of both
/// profiles, restricted to q-degrees valid in both series. Output is in
/// canonical monomial order.
pub fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Vec<Mismatch> {
    let region = lhs.profile().meet(&rhs.profile());
    let valid = lhs.valid_to_q().min(rhs.valid_to_q());
    let inside = |m: &Monomial| region.contains(m) && (m.q as i64) <= valid;
    let mut keys: Vec<Monomial> = lhs
        .terms()
        .chain(rhs.terms())
        .map(|(m, _)| *m)
        .filter(|m| inside(m))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|m| {
            let l = lhs.coefficient(&m).expect("inside region");
            let r = rhs.coefficient(&m).expect("inside region");
            (l != r).then_some(Mismatch {
                monomial: m,
                lhs: l,
                rhs: r,
            })
        })
        .collect()
}

/// Accumulates comparisons into a [`VerificationReport`].
pub struct ReportBuilder {
    case: String,
    mode: Mode,
    caps: TruncationProfile,
    assignment: Option<BTreeMap<String, String>>,
    started: Instant,
    mismatches: BTreeMap<Monomial, Mismatch>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(case: IdentityCase, mode: Mode, caps: TruncationProfile) -> Self {
        Self::named(case.name(), mode, caps)
    }

    /// A builder for checks that are not one of the [`IdentityCase`]s.
    pub fn named(case: &str, mode: Mode, caps: TruncationProfile) -> Self {
        ReportBuilder {
            case: case.to_string(),
            mode,
            caps,
            assignment: None,
            started: Instant::now(),
            mismatches: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn assignment(mut self, assignment: BTreeMap<String, String>) -> Self {
        self.assignment = Some(assignment);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Compares two series and records the outcome; the first check to flag
    /// a monomial owns its table row. Returns the mismatch count.
    pub fn check(&mut self, label: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> usize {
        let found = compare(lhs, rhs);
        let n = found.len();
        let valid = lhs.valid_to_q().min(rhs.valid_to_q());
        self.notes.push(if n == 0 {
            format!("{label}: equal (compared through q^{valid})")
        } else {
            format!("{label}: {n} mismatching coefficients (compared through q^{valid})")
        });
        for m in found {
            self.mismatches.entry(m.monomial).or_insert(m);
        }
        n
    }

    pub fn finish(self) -> VerificationReport {
        let status = if self.mismatches.is_empty() {
            Status::Verified
        } else {
            Status::Mismatch
        };
        VerificationReport {
            case: self.case,
            mode: self.mode,
            caps: self.caps,
            assignment: self.assignment,
            status,
            mismatches: self.mismatches.into_values().collect(),
            notes: self.notes,
            volatile: Volatile {
                duration_ms: self.started.elapsed().as_millis() as u64,
                version: env!("CARGO_PKG_VERSION").into(),
            },
        }
    }
}
