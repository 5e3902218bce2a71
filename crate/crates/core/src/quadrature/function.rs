use std::fmt;
use std::sync::Arc;

use crate::domain::Interval;
use crate::error::{Error, Result};

/// Behaviour of a function as `x -> inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Support is bounded.
    CompactSupport,
    /// `|f(x)| <= C x^(-beta)` for large `x`. Negative `beta` describes
    /// polynomial growth and is accepted for transform evaluation only.
    PowerLaw(f64),
    /// `|f(x)| <= C e^(-rate x)` times at most polynomial factors.
    Exponential(f64),
}

impl Decay {
    /// Whether `int^inf |f|` converges under this decay.
    pub fn integrable(&self) -> bool {
        match *self {
            Decay::CompactSupport | Decay::Exponential(_) => true,
            Decay::PowerLaw(beta) => beta > 1.0,
        }
    }

    fn slowest(self, other: Decay) -> Decay {
        use Decay::*;
        match (self, other) {
            (PowerLaw(a), PowerLaw(b)) => PowerLaw(a.min(b)),
            (PowerLaw(a), _) | (_, PowerLaw(a)) => PowerLaw(a),
            (Exponential(a), Exponential(b)) => Exponential(a.min(b)),
            (Exponential(a), _) | (_, Exponential(a)) => Exponential(a),
            (CompactSupport, CompactSupport) => CompactSupport,
        }
    }
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on `(0, inf)` with the metadata quadrature relies on.
///
/// `eval` is only called on the support; outside it the function is zero.
/// Near the left support endpoint `lo`, `|f(lo + t)| t^alpha` stays bounded
/// with `alpha = singularity()`.
#[derive(Clone)]
pub struct TestFunction {
    eval: Eval,
    support: Interval,
    singularity: f64,
    decay: Decay,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("singularity", &self.singularity)
            .field("decay", &self.decay)
            .finish()
    }
}

impl TestFunction {
    pub fn new(
        label: impl Into<String>,
        support: Interval,
        singularity: f64,
        decay: Decay,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let support = Interval::new(support.lo, support.hi)?;
        if support.hi <= support.lo {
            return Err(Error::InvalidInterval {
                lo: support.lo,
                hi: support.hi,
            });
        }
        if !(0.0..1.0).contains(&singularity) {
            return Err(Error::InvalidParameter(format!(
                "singularity exponent must lie in [0, 1), got {singularity}"
            )));
        }
        let decay = match decay {
            _ if support.is_bounded() => Decay::CompactSupport,
            Decay::CompactSupport => {
                return Err(Error::InvalidParameter(
                    "compact decay declared for unbounded support".into(),
                ))
            }
            Decay::PowerLaw(b) if !b.is_finite() => {
                return Err(Error::InvalidParameter(format!("power-law exponent {b}")))
            }
            Decay::Exponential(r) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::InvalidParameter(format!("decay rate {r}")))
            }
            d => d,
        };
        Ok(Self {
            eval: Arc::new(eval),
            support,
            singularity,
            decay,
            breakpoints: Vec::new(),
            label: label.into(),
        })
    }

    /// Declares interior points where `f` may jump.
    pub fn with_breakpoints(mut self, points: &[f64]) -> Self {
        self.breakpoints.extend(
            points
                .iter()
                .filter(|&&y| y > self.support.lo && y < self.support.hi),
        );
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `f = c` on `[0, inf)`.
    pub fn constant(c: f64) -> Self {
        Self::new(
            format!("const({c})"),
            Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            0.0,
            Decay::PowerLaw(0.0),
            move |_| c,
        )
        .expect("valid constant")
    }

    /// Indicator of `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(
            format!("indicator[{a},{b}]"),
            Interval::new(a, b)?,
            0.0,
            Decay::CompactSupport,
            |_| 1.0,
        )
    }

    /// `f(y) = e^(-rate y)` on `[0, inf)`.
    pub fn exp_decay(rate: f64) -> Result<Self> {
        Self::new(
            format!("exp(-{rate}y)"),
            Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            0.0,
            Decay::Exponential(rate),
            move |y| (-rate * y).exp(),
        )
    }

    /// `f(y) = y^k` on `[lo, hi]`; `k > -1` is needed when `lo = 0`.
    pub fn power(k: f64, lo: f64, hi: f64) -> Result<Self> {
        let singularity = if lo == 0.0 { (-k).max(0.0) } else { 0.0 };
        Self::new(
            format!("y^{k} on [{lo},{hi}]"),
            Interval::new(lo, hi)?,
            singularity,
            Decay::PowerLaw(-k),
            move |y| y.powf(k),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn singularity(&self) -> f64 {
        self.singularity
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    /// `int |f|` over the support is finite.
    pub fn is_integrable(&self) -> bool {
        self.decay.integrable()
    }

    /// Evaluates `f(x)`, zero off the support.
    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.support.lo && x <= self.support.hi {
            (self.eval)(x)
        } else {
            0.0
        }
    }

    /// `c f`.
    pub fn scaled_by(&self, c: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |x| c * inner(x)),
            label: format!("{c}*{}", self.label),
            ..self.clone()
        }
    }

    /// The dilation `x -> f(lambda x)`; support and decay rate rescale by `1/lambda`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let inner = self.eval.clone();
        let decay = match self.decay {
            Decay::Exponential(r) => Decay::Exponential(r * lambda),
            d => d,
        };
        Ok(Self {
            eval: Arc::new(move |x| inner(lambda * x)),
            support: Interval {
                lo: self.support.lo / lambda,
                hi: self.support.hi / lambda,
            },
            decay,
            breakpoints: self.breakpoints.iter().map(|y| y / lambda).collect(),
            label: format!("{}(dilated {lambda})", self.label),
            ..self.clone()
        })
    }

    /// `a f + b g`.
    pub fn linear_combination(a: f64, f: &TestFunction, b: f64, g: &TestFunction) -> Self {
        let lo = f.support.lo.min(g.support.lo);
        let hi = f.support.hi.max(g.support.hi);
        let alpha = |h: &TestFunction| {
            if h.support.lo == lo {
                h.singularity
            } else {
                0.0
            }
        };
        let (fc, gc) = (f.clone(), g.clone());
        let decay = if hi.is_finite() {
            Decay::CompactSupport
        } else {
            let unbounded = |h: &TestFunction| h.support.hi.is_infinite();
            match (unbounded(f), unbounded(g)) {
                (true, true) => f.decay.slowest(g.decay),
                (true, false) => f.decay,
                _ => g.decay,
            }
        };
        let mut breaks = f.breakpoints.clone();
        breaks.extend_from_slice(&g.breakpoints);
        for h in [f, g] {
            breaks.push(h.support.lo);
            breaks.push(h.support.hi);
        }
        Self {
            eval: Arc::new(move |x| a * fc.eval(x) + b * gc.eval(x)),
            support: Interval { lo, hi },
            singularity: alpha(f).max(alpha(g)),
            decay,
            breakpoints: Vec::new(),
            label: format!("{a}*{} + {b}*{}", f.label, g.label),
        }
        .with_breakpoints(&breaks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_outside_support() {
        let f = TestFunction::indicator(0.0, 1.0).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.5), 0.0);
        assert_eq!(f.decay(), Decay::CompactSupport);
    }

    #[test]
    fn dilation_rescales_support() {
        let f = TestFunction::indicator(0.0, 1.0)
            .unwrap()
            .dilate(2.0)
            .unwrap();
        assert_eq!(f.support(), Interval { lo: 0.0, hi: 0.5 });
        assert_eq!(f.eval(0.4), 1.0);
        assert_eq!(f.eval(0.6), 0.0);
        let g = TestFunction::exp_decay(1.0).unwrap().dilate(3.0).unwrap();
        assert_eq!(g.decay(), Decay::Exponential(3.0));
        assert!(TestFunction::constant(1.0).dilate(0.0).is_err());
    }

    #[test]
    fn identity_dilation() {
        let f = TestFunction::exp_decay(1.0).unwrap();
        let g = f.dilate(1.0).unwrap();
        for x in [0.0, 0.3, 2.0, 10.0] {
            assert_eq!(f.eval(x), g.eval(x));
        }
    }

    #[test]
    fn power_metadata() {
        let f = TestFunction::power(-0.5, 0.0, f64::INFINITY).unwrap();
        assert_eq!(f.singularity(), 0.5);
        assert_eq!(f.decay(), Decay::PowerLaw(0.5));
        assert!(!f.is_integrable());
        assert!(TestFunction::power(-1.0, 0.0, 1.0).is_err());
        let g = TestFunction::power(-1.0, 1.0, f64::INFINITY).unwrap();
        assert_eq!(g.singularity(), 0.0);
    }

    #[test]
    fn rejects_inconsistent_metadata() {
        let support = Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        };
        assert!(TestFunction::new("x", support, 0.0, Decay::CompactSupport, |_| 0.0).is_err());
        assert!(TestFunction::new("x", support, 1.0, Decay::PowerLaw(2.0), |_| 0.0).is_err());
        assert!(TestFunction::new("x", support, 0.0, Decay::Exponential(-1.0), |_| 0.0).is_err());
    }

    #[test]
    fn linear_combination_metadata() {
        let f = TestFunction::exp_decay(2.0).unwrap();
        let g = TestFunction::power(-0.5, 0.0, 1.0).unwrap();
        let h = TestFunction::linear_combination(2.0, &f, -1.0, &g);
        assert_eq!(h.singularity(), 0.5);
        assert_eq!(h.decay(), Decay::Exponential(2.0));
        assert!((h.eval(0.25) - (2.0 * (-0.5f64).exp() - 2.0)).abs() < 1e-15);
    }
}
