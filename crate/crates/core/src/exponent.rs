//! Lebesgue exponents on `[1, inf]` with the infinite endpoint kept symbolic.

use core::fmt;

use crate::error::{Error, Result};

/// An exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    /// `1 <= p < inf`.
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Accepts `p` in `[1, inf)`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn finite(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(Exponent::Infinity);
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Exponent::Finite(p))
    }

    /// `1/p`, exactly zero at infinity.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(2.0) => Exponent::TWO,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    /// The twist exponent `1/p - 1/2`.
    pub fn twist(self) -> f64 {
        self.recip() - 0.5
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Numeric value, `f64::INFINITY` for the symbolic endpoint.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `p <= 2`.
    pub fn at_most_two(self) -> bool {
        matches!(self, Exponent::Finite(p) if p <= 2.0)
    }

    /// `p < 2`.
    pub fn below_two(self) -> bool {
        matches!(self, Exponent::Finite(p) if p < 2.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// A pair `(p, p')` of conjugate exponents together with the twist `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    pub p: Exponent,
    pub conj: Exponent,
    pub x: f64,
}

impl ExponentPair {
    pub fn new(p: Exponent, x: f64) -> Self {
        Self {
            p,
            conj: p.conjugate(),
            x,
        }
    }

    /// The block scaling exponent `(1/p - 1/2) x`.
    pub fn scaling(&self) -> f64 {
        self.p.twist() * self.x
    }
}
