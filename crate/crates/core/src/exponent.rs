use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance on `1/p + 1/q - 1` below which a pair counts as conjugate.
pub const DUALITY_TOLERANCE: f64 = 1e-12;

/// A value in the extended range `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    fn reciprocal(self) -> f64 {
        match self {
            ExtReal::Finite(v) => 1.0 / v,
            ExtReal::Infinity => 0.0,
        }
    }
}

/// A Lebesgue exponent `p` in `[1, inf]`, carrying its conjugate `p'`.
///
/// The conjugate is computed once at construction and swapped by
/// [`LebesgueExponent::conjugate`], so conjugation is an exact involution.
#[derive(Debug, Clone, Copy)]
pub struct LebesgueExponent {
    value: ExtReal,
    conj: ExtReal,
}

impl LebesgueExponent {
    pub const ONE: LebesgueExponent = LebesgueExponent {
        value: ExtReal::Finite(1.0),
        conj: ExtReal::Infinity,
    };
    pub const INFINITY: LebesgueExponent = LebesgueExponent {
        value: ExtReal::Infinity,
        conj: ExtReal::Finite(1.0),
    };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(format!("{p}")));
        }
        if p == f64::INFINITY {
            return Ok(Self::INFINITY);
        }
        if p == 1.0 {
            return Ok(Self::ONE);
        }
        Ok(Self {
            value: ExtReal::Finite(p),
            conj: ExtReal::Finite(p / (p - 1.0)),
        })
    }

    /// Builds the exponent whose reciprocal is `r` (`r = 0` gives `inf`).
    pub fn from_reciprocal(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidExponent(format!("1/{r}")));
        }
        if r == 0.0 {
            return Ok(Self::INFINITY);
        }
        if r == 1.0 {
            return Ok(Self::ONE);
        }
        Ok(Self {
            value: ExtReal::Finite(1.0 / r),
            conj: ExtReal::Finite(1.0 / (1.0 - r)),
        })
    }

    pub fn value(&self) -> ExtReal {
        self.value
    }

    /// The exponent as an `f64`, with `inf` mapped to `f64::INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match self.value {
            ExtReal::Finite(v) => v,
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    /// Finite value, or `None` for `inf`.
    pub fn finite(&self) -> Option<f64> {
        match self.value {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == ExtReal::Infinity
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn reciprocal(&self) -> f64 {
        self.value.reciprocal()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            value: self.conj,
            conj: self.value,
        }
    }
}

impl PartialEq for LebesgueExponent {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

/// `p'` for `p`; see [`LebesgueExponent::conjugate`].
pub fn conjugate(p: LebesgueExponent) -> LebesgueExponent {
    p.conjugate()
}

/// True when `1/p + 1/q = 1` up to [`DUALITY_TOLERANCE`].
pub fn on_duality_line(p: LebesgueExponent, q: LebesgueExponent) -> bool {
    (p.reciprocal() + q.reciprocal() - 1.0).abs() < DUALITY_TOLERANCE
}

impl fmt::Display for LebesgueExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for LebesgueExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(Self::INFINITY),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidExponent(s.to_string()))?;
                Self::new(v)
            }
        }
    }
}
