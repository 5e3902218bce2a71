use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Target set of an integral in `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainSpec {
    /// `[0, inf)`.
    FullHalfLine,
    /// `[a, b]` with `0 <= a < b < inf`.
    Bounded { a: f64, b: f64 },
    /// `[s, inf)` with `s > 0`.
    Tail { s: f64 },
}

impl DomainSpec {
    pub fn bounded(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b) {
            return Err(Error::InvalidDomain(format!(
                "bounded domain needs 0 <= a < b < inf, got a={a}, b={b}"
            )));
        }
        Ok(DomainSpec::Bounded { a, b })
    }

    pub fn tail(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "tail domain needs s > 0, got s={s}"
            )));
        }
        Ok(DomainSpec::Tail { s })
    }

    /// Re-checks the invariants of a value built by hand.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::FullHalfLine => Ok(()),
            DomainSpec::Bounded { a, b } => Self::bounded(a, b).map(|_| ()),
            DomainSpec::Tail { s } => Self::tail(s).map(|_| ()),
        }
    }

    /// `(lo, hi)` with `hi = f64::INFINITY` for unbounded variants.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            DomainSpec::FullHalfLine => (0.0, f64::INFINITY),
            DomainSpec::Bounded { a, b } => (a, b),
            DomainSpec::Tail { s } => (s, f64::INFINITY),
        }
    }

    pub fn interval(&self) -> Interval {
        let (lo, hi) = self.bounds();
        Interval { lo, hi }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::FullHalfLine => f.write_str("full"),
            DomainSpec::Bounded { a, b } => write!(f, "bounded:{a},{b}"),
            DomainSpec::Tail { s } => write!(f, "tail:{s}"),
        }
    }
}

/// Parses `full`, `bounded:a,b` or `tail:s`.
impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidDomain(format!("cannot parse domain '{text}'"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        if text == "full" {
            return Ok(DomainSpec::FullHalfLine);
        }
        if let Some(rest) = text.strip_prefix("bounded:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            return DomainSpec::bounded(num(a)?, num(b)?);
        }
        if let Some(rest) = text.strip_prefix("tail:") {
            return DomainSpec::tail(num(rest)?);
        }
        Err(bad())
    }
}

/// A closed interval `[lo, hi]` of the half-line; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || !lo.is_finite() || hi < lo {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_variants() {
        assert_eq!(
            "full".parse::<DomainSpec>().unwrap(),
            DomainSpec::FullHalfLine
        );
        assert_eq!(
            "bounded:0,1".parse::<DomainSpec>().unwrap(),
            DomainSpec::Bounded { a: 0.0, b: 1.0 }
        );
        assert_eq!(
            "tail:2.5".parse::<DomainSpec>().unwrap(),
            DomainSpec::Tail { s: 2.5 }
        );
    }

    #[test]
    fn rejects_invalid_bounds() {
        assert!("bounded:1,1".parse::<DomainSpec>().is_err());
        assert!("bounded:-1,1".parse::<DomainSpec>().is_err());
        assert!("bounded:0,inf".parse::<DomainSpec>().is_err());
        assert!("tail:0".parse::<DomainSpec>().is_err());
        assert!("tail:x".parse::<DomainSpec>().is_err());
        assert!("half".parse::<DomainSpec>().is_err());
        assert!(DomainSpec::Tail { s: -1.0 }.validate().is_err());
    }

    #[test]
    fn display_round_trips() {
        for d in [
            DomainSpec::FullHalfLine,
            DomainSpec::Bounded { a: 0.5, b: 2.0 },
            DomainSpec::Tail { s: 1.0 },
        ] {
            assert_eq!(d.to_string().parse::<DomainSpec>().unwrap(), d);
        }
    }

    #[test]
    fn interval_intersection() {
        let a = Interval::new(0.0, 1.0).unwrap();
        let b = Interval::new(0.5, f64::INFINITY).unwrap();
        assert_eq!(a.intersect(&b), Some(Interval { lo: 0.5, hi: 1.0 }));
        let c = Interval::new(2.0, 3.0).unwrap();
        assert_eq!(a.intersect(&c), None);
        assert!(Interval::new(2.0, 1.0).is_err());
    }
}
