use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `a^a · b^b · t^t · q^q` with nonnegative exponents.
///
/// Ordered lexicographically on `(q, a, b, t)`; this is the canonical order
/// of every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub t: u32,
    pub q: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, b: 0, t: 0, q: 0 };

    pub const fn new(a: u32, b: u32, t: u32, q: u32) -> Self {
        Monomial { a, b, t, q }
    }

    pub const fn q(q: u32) -> Self {
        Monomial { a: 0, b: 0, t: 0, q }
    }

    pub const fn b(b: u32) -> Self {
        Monomial { a: 0, b, t: 0, q: 0 }
    }

    pub const fn t(t: u32) -> Self {
        Monomial { a: 0, b: 0, t, q: 0 }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// True when the monomial involves no parameter (only a power of `q`).
    pub fn is_pure_q(&self) -> bool {
        self.a == 0 && self.b == 0 && self.t == 0
    }

    pub fn swap_b_t(&self) -> Self {
        Monomial {
            b: self.t,
            t: self.b,
            ..*self
        }
    }

    pub fn with_q(&self, q: u32) -> Self {
        Monomial { q, ..*self }
    }

    /// Human-oriented rendering, e.g. `a·b·q^2`.
    pub fn pretty(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (name, e) in [("a", self.a), ("b", self.b), ("t", self.t), ("q", self.q)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("·")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.a, self.b, self.t).cmp(&(other.q, other.a, other.b, other.t))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            t: self.t + rhs.t,
            q: self.q + rhs.q,
        }
    }
}

/// Compact token form used on the command line: `a1b1t1q2`. Zero exponents
/// are omitted; the unit monomial prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (name, e) in [('a', self.a), ('b', self.b), ('t', self.t), ('q', self.q)] {
            if e > 0 {
                write!(f, "{name}{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid monomial {0:?} (expected tokens like a1b1t1q2)")]
pub struct ParseMonomialError(pub String);

impl FromStr for Monomial {
    type Err = ParseMonomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMonomialError(s.to_string());
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::ONE);
        }
        if s.is_empty() {
            return Err(err());
        }
        let mut m = Monomial::ONE;
        let mut seen = [false; 4];
        let mut chars = s.chars().peekable();
        while let Some(var) = chars.next() {
            let slot = match var {
                'a' => 0,
                'b' => 1,
                't' => 2,
                'q' => 3,
                _ => return Err(err()),
            };
            if seen[slot] {
                return Err(err());
            }
            seen[slot] = true;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|c| c.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let e: u32 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| err())?
            };
            match slot {
                0 => m.a = e,
                1 => m.b = e,
                2 => m.t = e,
                _ => m.q = e,
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let m: Monomial = "a1b1t1q2".parse().unwrap();
        assert_eq!(m, Monomial::new(1, 1, 1, 2));
        assert_eq!(m.to_string(), "a1b1t1q2");
        assert_eq!("b3t0q0".parse::<Monomial>().unwrap(), Monomial::b(3));
        assert_eq!("q".parse::<Monomial>().unwrap(), Monomial::q(1));
        assert_eq!("1".parse::<Monomial>().unwrap(), Monomial::ONE);
        assert_eq!(Monomial::ONE.to_string(), "1");
        for bad in ["", "x2", "a1a2", "q-1", "a1 b2"] {
            assert!(bad.parse::<Monomial>().is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_order_is_q_first() {
        let mut v = vec![
            Monomial::new(0, 0, 1, 0),
            Monomial::new(1, 0, 0, 0),
            Monomial::q(1),
            Monomial::new(0, 1, 0, 0),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Monomial::new(0, 0, 1, 0),
                Monomial::new(0, 1, 0, 0),
                Monomial::new(1, 0, 0, 0),
                Monomial::q(1),
            ]
        );
    }

    #[test]
    fn pretty_form() {
        assert_eq!(Monomial::new(1, 1, 0, 2).pretty(), "a·b·q^2");
    }
}
