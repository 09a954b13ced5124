//! Both sides of every identity, and checkers comparing them.
//!
//! Formal-mode cases keep `a, b, t` as variables and compare coefficient
//! tables inside a [`TruncationProfile`]. Rational-mode cases fix the
//! parameters at exact rationals (needed wherever `1/a` appears) and compare
//! series in `q` alone.

mod formal;
mod rational_mode;
mod report;

pub use formal::{
    build_eq31_side, build_f_series, build_thm11_side, build_thm31_side, verify_eq31,
    verify_eq31_with_input_cap, verify_f_sym_formal, verify_reduction_a0, verify_thm11,
    verify_thm31, FRole, Side, Thm31, Thm31Side,
};
pub use rational_mode::{
    rational_series_eval, verify_chain, verify_eq22, verify_eq23, verify_f_sym_rational,
    verify_qps, ChainStep, RationalAssignment, RationalSide,
};
pub use report::{compare, Mismatch, Mode, ReportBuilder, Status, VerificationReport, Volatile};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::series::{SeriesError, TruncationProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("missing parameter `{0}` for this case")]
    MissingParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("case {case} does not support {mode} mode")]
    UnsupportedMode { case: IdentityCase, mode: Mode },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, IdentityError>;

/// Every checkable identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityCase {
    /// The main symmetric identity in `a, b, t`.
    Thm1_1,
    /// `f(α, β) = f(β, α)` for the two-parameter symmetric function.
    FSym,
    /// The `q → q²`, `a → a/q` specialization built two ways.
    Eq31Consistency,
    /// Terminating q-Pfaff–Saalschütz summation.
    Qps21,
    /// Its rewrite with `(c/ab)_{N−n}` in the summand.
    Rewrite22,
    /// The `c = bq` specialization.
    Eq23,
    ChainStart,
    ChainShift,
    ChainFine,
    ChainFinal,
    Thm34,
    Thm35,
    /// The `a = 0` stratum of the main identity against `f(b, t)`.
    ReductionA0,
}

impl IdentityCase {
    pub const ALL: [IdentityCase; 13] = [
        IdentityCase::Thm1_1,
        IdentityCase::FSym,
        IdentityCase::Eq31Consistency,
        IdentityCase::Qps21,
        IdentityCase::Rewrite22,
        IdentityCase::Eq23,
        IdentityCase::ChainStart,
        IdentityCase::ChainShift,
        IdentityCase::ChainFine,
        IdentityCase::ChainFinal,
        IdentityCase::Thm34,
        IdentityCase::Thm35,
        IdentityCase::ReductionA0,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityCase::Thm1_1 => "thm1_1",
            IdentityCase::FSym => "f_sym",
            IdentityCase::Eq31Consistency => "eq3_1_consistency",
            IdentityCase::Qps21 => "qps_2_1",
            IdentityCase::Rewrite22 => "rewrite_2_2",
            IdentityCase::Eq23 => "eq2_3",
            IdentityCase::ChainStart => "chain_start",
            IdentityCase::ChainShift => "chain_shift",
            IdentityCase::ChainFine => "chain_fine",
            IdentityCase::ChainFinal => "chain_final",
            IdentityCase::Thm34 => "thm3_4",
            IdentityCase::Thm35 => "thm3_5",
            IdentityCase::ReductionA0 => "reduction_a0",
        }
    }

    pub fn modes(&self) -> &'static [Mode] {
        match self {
            IdentityCase::FSym => &[Mode::Formal, Mode::Rational],
            IdentityCase::Thm1_1
            | IdentityCase::Eq31Consistency
            | IdentityCase::Thm34
            | IdentityCase::Thm35
            | IdentityCase::ReductionA0 => &[Mode::Formal],
            _ => &[Mode::Rational],
        }
    }

    pub fn default_mode(&self) -> Mode {
        self.modes()[0]
    }

    /// Parameters a rational-mode run must supply.
    pub fn required_parameters(&self) -> &'static [&'static str] {
        match self {
            IdentityCase::FSym => &["alpha", "beta", "k1", "k2"],
            IdentityCase::Qps21 | IdentityCase::Rewrite22 => &["a", "b", "c", "N"],
            IdentityCase::Eq23 => &["a", "b", "N"],
            IdentityCase::ChainStart
            | IdentityCase::ChainShift
            | IdentityCase::ChainFine
            | IdentityCase::ChainFinal => &["a", "b", "t"],
            _ => &[],
        }
    }
}

impl fmt::Display for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown identity {0:?}")]
pub struct UnknownIdentity(pub String);

impl FromStr for IdentityCase {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let alias = match s {
            "eq1_3" => "thm1_1",
            "eq3_1" => "eq3_1_consistency",
            "eq2_1" | "qps" => "qps_2_1",
            "eq2_2" => "rewrite_2_2",
            other => other,
        };
        IdentityCase::ALL
            .iter()
            .copied()
            .find(|c| c.name() == alias)
            .ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

/// Runs a case in the requested mode. Formal cases read `profile`;
/// rational cases read `assignment` and `profile.q`.
pub fn run_case(
    case: IdentityCase,
    mode: Mode,
    profile: TruncationProfile,
    assignment: &RationalAssignment,
) -> Result<VerificationReport> {
    if !case.modes().contains(&mode) {
        return Err(IdentityError::UnsupportedMode { case, mode });
    }
    let cap_q = profile.q;
    match (case, mode) {
        (IdentityCase::Thm1_1, _) => verify_thm11(profile),
        (IdentityCase::FSym, Mode::Formal) => verify_f_sym_formal(profile),
        (IdentityCase::FSym, Mode::Rational) => {
            let (alpha, beta) = (assignment.need_alpha()?, assignment.need_beta()?);
            let (k1, k2) = (assignment.need_k1()?, assignment.need_k2()?);
            verify_f_sym_rational(&alpha, &beta, k1, k2, cap_q)
        }
        (IdentityCase::Eq31Consistency, _) => verify_eq31(profile),
        (IdentityCase::ReductionA0, _) => verify_reduction_a0(profile),
        (IdentityCase::Thm34, _) => verify_thm31(Thm31::Eq34, profile),
        (IdentityCase::Thm35, _) => verify_thm31(Thm31::Eq35, profile),
        (IdentityCase::Qps21, _) => verify_qps(assignment, cap_q),
        (IdentityCase::Rewrite22, _) => verify_eq22(assignment, cap_q),
        (IdentityCase::Eq23, _) => verify_eq23(assignment, cap_q),
        (IdentityCase::ChainStart, _) => verify_chain(ChainStep::Start, assignment, cap_q),
        (IdentityCase::ChainShift, _) => verify_chain(ChainStep::Shift, assignment, cap_q),
        (IdentityCase::ChainFine, _) => verify_chain(ChainStep::Fine, assignment, cap_q),
        (IdentityCase::ChainFinal, _) => verify_chain(ChainStep::Final, assignment, cap_q),
    }
}

#[cfg(test)]
mod tests;
