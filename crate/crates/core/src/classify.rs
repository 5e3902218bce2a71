//! Exact continuity classifier for `L: L^p(R+) -> L^q(domain)`.
//!
//! Three regimes, in `(1/p, 1/q)` coordinates with `s = 1/p + 1/q`:
//!
//! * bounded domains: continuous iff `s > 1`, or `s = 1` with `p <= 2`;
//! * tails `[s0, inf)`: continuous iff `s < 1`, or `s = 1` with `p <= 2`;
//! * the whole half-line: continuous iff `s = 1` with `p <= 2`.

use rayon::prelude::*;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exponent::{on_duality_line, LebesgueExponent};

/// The argument that decides a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// Pointwise Hölder bound integrated near the origin.
    HolderLocal,
    /// Pointwise Hölder bound integrated over a tail.
    TailEstimate,
    /// Hardy's inequality on the conjugate line, `1 <= p <= 2`.
    HardyDualityLine,
    /// Dilations `f(lambda x)` force the wrong sign of `1 - 1/p - 1/q`.
    ScalingNecessity,
    /// Power-law families with ratio growing like `eps^(2/p - 1)`.
    CounterexampleBlowup,
    /// `L{1}(x) = 1/x` is not `q`-integrable on the domain.
    TrivialConstant,
    /// Bloom's negative result on the half-line, `1 <= q <= 2 < p`.
    BloomFullLine,
}

impl Reason {
    pub fn implies_continuity(self) -> bool {
        matches!(
            self,
            Reason::HolderLocal | Reason::TailEstimate | Reason::HardyDualityLine
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Reason::HolderLocal => "HolderLocal",
            Reason::TailEstimate => "TailEstimate",
            Reason::HardyDualityLine => "HardyDualityLine",
            Reason::ScalingNecessity => "ScalingNecessity",
            Reason::CounterexampleBlowup => "CounterexampleBlowup",
            Reason::TrivialConstant => "TrivialConstant",
            Reason::BloomFullLine => "BloomFullLine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuityVerdict {
    pub continuous: bool,
    pub reason: Reason,
}

impl ContinuityVerdict {
    fn from_reason(reason: Reason) -> Self {
        Self {
            continuous: reason.implies_continuity(),
            reason,
        }
    }
}

pub fn classify(
    p: LebesgueExponent,
    q: LebesgueExponent,
    domain: &DomainSpec,
) -> Result<ContinuityVerdict> {
    domain.validate()?;
    let sum = p.reciprocal() + q.reciprocal();
    let on_line = on_duality_line(p, q);
    let p_le_2 = p.as_f64() <= 2.0;

    if on_line && p_le_2 {
        return Ok(ContinuityVerdict::from_reason(Reason::HardyDualityLine));
    }

    // Bounded(a, b) with a > 0 is treated as Bounded(0, b): the theorem is
    // stated for every bounded set, so 1/x near the origin is still the witness.
    // On a tail 1/x is q-integrable for every q > 1.
    let constant_witness = match domain {
        DomainSpec::Tail { .. } => q.as_f64() <= 1.0,
        DomainSpec::Bounded { .. } | DomainSpec::FullHalfLine => true,
    };
    if p.is_infinite() && constant_witness {
        return Ok(ContinuityVerdict::from_reason(Reason::TrivialConstant));
    }

    let reason = match domain {
        DomainSpec::Bounded { .. } => {
            if on_line {
                Reason::CounterexampleBlowup
            } else if sum > 1.0 {
                Reason::HolderLocal
            } else {
                Reason::ScalingNecessity
            }
        }
        DomainSpec::Tail { .. } => {
            if on_line {
                Reason::CounterexampleBlowup
            } else if sum < 1.0 {
                Reason::TailEstimate
            } else {
                Reason::ScalingNecessity
            }
        }
        DomainSpec::FullHalfLine => {
            if on_line {
                Reason::CounterexampleBlowup
            } else if q.as_f64() <= 2.0 && p.as_f64() > 2.0 {
                Reason::BloomFullLine
            } else {
                Reason::ScalingNecessity
            }
        }
    };
    Ok(ContinuityVerdict::from_reason(reason))
}

/// One lattice point of a region sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    /// `1/p`.
    pub inv_p: f64,
    /// `1/q`.
    pub inv_q: f64,
    pub verdict: ContinuityVerdict,
}

/// Classifies every point of the `(1/p, 1/q)` lattice on `[0, 1]^2`.
///
/// Points are ordered row-major with `1/q` outer and `1/p` inner, both
/// ascending.
pub fn region_sweep(grid_step: f64, domain: &DomainSpec) -> Result<Vec<RegionPoint>> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid step must lie in (0, 1], got {grid_step}"
        )));
    }
    let cells = (1.0 / grid_step).round();
    if (cells * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} does not divide 1 into whole cells"
        )));
    }
    domain.validate()?;
    let n = cells as usize;
    let coord = |k: usize| k as f64 / n as f64;

    (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|idx| {
            let (j, i) = (idx / (n + 1), idx % (n + 1));
            let (inv_p, inv_q) = (coord(i), coord(j));
            let p = LebesgueExponent::from_reciprocal(inv_p)?;
            let q = LebesgueExponent::from_reciprocal(inv_q)?;
            Ok(RegionPoint {
                inv_p,
                inv_q,
                verdict: classify(p, q, domain)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(v: f64) -> LebesgueExponent {
        LebesgueExponent::new(v).unwrap()
    }
    const INF: LebesgueExponent = LebesgueExponent::INFINITY;
    const UNIT: DomainSpec = DomainSpec::Bounded { a: 0.0, b: 1.0 };
    const TAIL: DomainSpec = DomainSpec::Tail { s: 1.0 };

    fn verdict(continuous: bool, reason: Reason) -> ContinuityVerdict {
        ContinuityVerdict { continuous, reason }
    }

    #[test]
    fn documented_examples() {
        assert_eq!(
            classify(e(2.0), e(2.0), &UNIT).unwrap(),
            verdict(true, Reason::HardyDualityLine)
        );
        assert_eq!(
            classify(INF, e(1.0), &TAIL).unwrap(),
            verdict(false, Reason::TrivialConstant)
        );
        assert_eq!(
            classify(e(3.0), e(1.5), &UNIT).unwrap(),
            verdict(false, Reason::CounterexampleBlowup)
        );
        assert_eq!(
            classify(e(1.0), e(1.0), &UNIT).unwrap(),
            verdict(true, Reason::HolderLocal)
        );
        assert_eq!(
            classify(e(1.0), e(1.0), &TAIL).unwrap(),
            verdict(false, Reason::ScalingNecessity)
        );
    }

    #[test]
    fn tail_strict_region_and_constant() {
        assert_eq!(
            classify(e(2.0), e(4.0), &TAIL).unwrap(),
            verdict(true, Reason::TailEstimate)
        );
        // 1/x is bounded on [1, inf), so L^inf -> L^inf is fine on a tail.
        assert_eq!(
            classify(INF, INF, &TAIL).unwrap(),
            verdict(true, Reason::TailEstimate)
        );
        assert_eq!(
            classify(INF, INF, &UNIT).unwrap(),
            verdict(false, Reason::TrivialConstant)
        );
    }

    #[test]
    fn full_line_branches() {
        let full = DomainSpec::FullHalfLine;
        assert!(classify(e(1.0), INF, &full).unwrap().continuous);
        assert!(classify(e(1.5), e(3.0), &full).unwrap().continuous);
        assert_eq!(
            classify(e(3.0), e(1.5), &full).unwrap().reason,
            Reason::CounterexampleBlowup
        );
        assert_eq!(
            classify(e(4.0), e(2.0), &full).unwrap().reason,
            Reason::BloomFullLine
        );
        assert_eq!(
            classify(e(1.5), e(1.5), &full).unwrap().reason,
            Reason::ScalingNecessity
        );
        assert_eq!(
            classify(INF, e(1.0), &full).unwrap().reason,
            Reason::TrivialConstant
        );
    }

    #[test]
    fn shifted_bounded_domain_matches_origin_interval() {
        let shifted = DomainSpec::Bounded { a: 2.0, b: 3.0 };
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (3.0, 1.5), (4.0, 4.0)] {
            assert_eq!(
                classify(e(p), e(q), &shifted).unwrap(),
                classify(e(p), e(q), &UNIT).unwrap()
            );
        }
    }

    #[test]
    fn near_line_input_counts_as_line() {
        let q = e(1.5 + 1e-14);
        assert_eq!(
            classify(e(3.0), q, &UNIT).unwrap().reason,
            Reason::CounterexampleBlowup
        );
    }

    fn members(points: &[RegionPoint], continuous: bool) -> Vec<(f64, f64)> {
        let mut v: Vec<_> = points
            .iter()
            .filter(|pt| pt.verdict.continuous == continuous)
            .map(|pt| (pt.inv_p, pt.inv_q))
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn region_sweep_half_step_bounded() {
        let pts = region_sweep(0.5, &UNIT).unwrap();
        assert_eq!(pts.len(), 9);
        assert_eq!(
            members(&pts, true),
            sorted(vec![
                (1.0, 1.0),
                (1.0, 0.5),
                (0.5, 1.0),
                (0.5, 0.5),
                (1.0, 0.0)
            ])
        );
        assert_eq!(
            members(&pts, false),
            sorted(vec![(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.0, 1.0)])
        );
    }

    #[test]
    fn region_sweep_half_step_tail() {
        let pts = region_sweep(0.5, &TAIL).unwrap();
        assert_eq!(
            members(&pts, true),
            sorted(vec![
                (0.0, 0.0),
                (0.5, 0.0),
                (0.0, 0.5),
                (0.5, 0.5),
                (1.0, 0.0)
            ])
        );
        assert_eq!(
            members(&pts, false),
            sorted(vec![(1.0, 1.0), (0.0, 1.0), (1.0, 0.5), (0.5, 1.0)])
        );
    }

    #[test]
    fn region_sweep_unit_step_full_line() {
        let pts = region_sweep(1.0, &DomainSpec::FullHalfLine).unwrap();
        assert_eq!(members(&pts, true), vec![(1.0, 0.0)]);
    }

    #[test]
    fn region_sweep_rejects_bad_steps() {
        assert!(region_sweep(0.3, &UNIT).is_err());
        assert!(region_sweep(0.0, &UNIT).is_err());
        assert!(region_sweep(1.5, &UNIT).is_err());
    }

    fn exponent() -> impl Strategy<Value = LebesgueExponent> {
        prop_oneof![
            9 => (1.0f64..50.0).prop_map(|v| e(v)),
            1 => Just(INF),
        ]
    }

    proptest! {
        #[test]
        fn reason_consistent_with_continuity(p in exponent(), q in exponent()) {
            for d in [UNIT, TAIL, DomainSpec::FullHalfLine] {
                let v = classify(p, q, &d).unwrap();
                prop_assert_eq!(v.continuous, v.reason.implies_continuity());
            }
        }

        #[test]
        fn full_line_continuity_implies_restricted(p in exponent(), q in exponent()) {
            if classify(p, q, &DomainSpec::FullHalfLine).unwrap().continuous {
                prop_assert!(classify(p, q, &UNIT).unwrap().continuous);
                prop_assert!(classify(p, q, &TAIL).unwrap().continuous);
            }
        }

        #[test]
        fn duality_line_above_two_is_discontinuous(inv_p in 0.0f64..0.499) {
            let p = LebesgueExponent::from_reciprocal(inv_p).unwrap();
            let q = p.conjugate();
            for d in [UNIT, TAIL, DomainSpec::FullHalfLine] {
                prop_assert!(!classify(p, q, &d).unwrap().continuous);
            }
        }

        #[test]
        fn bounded_region_is_upward_closed(
            inv_p in 0.0f64..=1.0, inv_q in 0.0f64..=1.0,
            dp in 0.0f64..=1.0, dq in 0.0f64..=1.0,
        ) {
            let p = LebesgueExponent::from_reciprocal(inv_p).unwrap();
            let q = LebesgueExponent::from_reciprocal(inv_q).unwrap();
            let (ip2, iq2) = (inv_p + dp * (1.0 - inv_p), inv_q + dq * (1.0 - inv_q));
            if classify(p, q, &UNIT).unwrap().continuous && ip2 + iq2 > 1.0 + 1e-9 {
                let p2 = LebesgueExponent::from_reciprocal(ip2.min(1.0)).unwrap();
                let q2 = LebesgueExponent::from_reciprocal(iq2.min(1.0)).unwrap();
                prop_assert!(classify(p2, q2, &UNIT).unwrap().continuous);
            }
        }
    }
}
