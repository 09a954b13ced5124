//! `identity:side` names for the `coeff` subcommand.

use std::str::FromStr;

use qsid_core::identities::{
    build_eq31_side, build_f_series, build_thm11_side, build_thm31_side, FRole, IdentityCase,
    IdentityError, Side, Thm31Side,
};
use qsid_core::{Monomial, Rational, TruncationProfile};

#[derive(Debug, Clone, Copy)]
pub enum SideSpec {
    Thm11(Side),
    Eq31(Side),
    F(FRole),
    Thm31(Thm31Side),
}

impl FromStr for SideSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || {
            format!(
                "unknown side {s:?}; expected one of thm1_1, eq3_1, f_sym, thm3_4, thm3_5 \
                 followed by :left or :right"
            )
        };
        let (name, side) = s.split_once(':').ok_or_else(err)?;
        let side = match side {
            "left" => Side::Left,
            "right" => Side::Right,
            _ => return Err(err()),
        };
        let case: IdentityCase = name.parse().map_err(|_| err())?;
        Ok(match case {
            IdentityCase::Thm1_1 => SideSpec::Thm11(side),
            IdentityCase::Eq31Consistency => SideSpec::Eq31(side),
            IdentityCase::FSym => SideSpec::F(match side {
                Side::Left => FRole::B,
                Side::Right => FRole::T,
            }),
            IdentityCase::Thm34 => SideSpec::Thm31(match side {
                Side::Left => Thm31Side::Eq34Left,
                Side::Right => Thm31Side::Eq34Right,
            }),
            IdentityCase::Thm35 => SideSpec::Thm31(match side {
                Side::Left => Thm31Side::Eq35Left,
                Side::Right => Thm31Side::Eq35Right,
            }),
            _ => return Err(err()),
        })
    }
}

/// The coefficient of `m`, computed in the smallest profile containing it.
pub fn coefficient(side: SideSpec, m: &Monomial) -> Result<Rational, IdentityError> {
    let profile = TruncationProfile::new(m.a, m.b, m.t, m.q);
    let series = match side {
        SideSpec::Thm11(s) => build_thm11_side(s, profile)?,
        SideSpec::Eq31(s) => build_eq31_side(s, profile)?,
        SideSpec::F(role) => build_f_series(role, profile)?,
        SideSpec::Thm31(s) => build_thm31_side(s, profile)?,
    };
    Ok(series.coefficient(m)?)
}
