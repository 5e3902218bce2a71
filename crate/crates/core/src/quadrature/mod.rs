//! Integrals, Laplace transforms and Lebesgue norms on the half-line.

mod engine;
mod function;

pub use engine::{QuadratureResult, DEFAULT_TOL, EVALUATION_BUDGET};
pub use function::{Decay, TestFunction};

pub(crate) use engine::{
    integrate_profile, integrate_profile_with_breaks, sup_abs, Profile, TailModel,
};

use crate::domain::{DomainSpec, Interval};
use crate::error::{Error, Result};
use crate::exponent::LebesgueExponent;

/// Sample count for essential suprema.
pub const SUP_SAMPLES: usize = 10_000;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn tail_model(decay: Decay, power: f64) -> TailModel {
    match decay {
        Decay::CompactSupport => TailModel::None,
        Decay::PowerLaw(beta) => TailModel::Power(beta * power),
        Decay::Exponential(rate) => TailModel::Exponential(rate * power),
    }
}

/// Profile of `|f|^power` restricted to `range`, or `None` if they are disjoint.
fn profile_of(f: &TestFunction, range: &Interval, power: f64) -> Option<Profile> {
    let support = f.support();
    let j = support.intersect(range)?;
    let left_exponent = if j.lo == support.lo {
        f.singularity() * power
    } else {
        0.0
    };
    let tail = if j.hi.is_infinite() {
        tail_model(f.decay(), power)
    } else {
        TailModel::None
    };
    Some(Profile {
        lo: j.lo,
        hi: j.hi,
        left_exponent,
        tail,
    })
}

fn empty() -> QuadratureResult {
    QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    }
}

/// `int f` over `interval`, with `f` extended by zero off its support.
pub fn integrate(f: &TestFunction, interval: Interval, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    let interval = Interval::new(interval.lo, interval.hi)?;
    match profile_of(f, &interval, 1.0) {
        Some(profile) => {
            integrate_profile_with_breaks(|y| Ok(f.eval(y)), &profile, f.breakpoints(), tol)
        }
        None => Ok(empty()),
    }
}

/// `L f(x) = int_0^inf f(y) e^(-x y) dy`.
///
/// `x = 0` is accepted for integrable `f` only.
pub fn laplace_point(f: &TestFunction, x: f64, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "transform point must be a finite x >= 0, got {x}"
        )));
    }
    let support = f.support();
    if x == 0.0 {
        if !f.is_integrable() {
            return Err(Error::InvalidParameter(format!(
                "L f(0) requires an integrable function, {} is not",
                f.label()
            )));
        }
        return integrate(f, support, tol);
    }
    let lo = support.lo;
    let profile = Profile {
        lo,
        hi: support.hi,
        left_exponent: f.singularity(),
        tail: TailModel::Exponential(match f.decay() {
            Decay::Exponential(rate) => x + rate,
            _ => x,
        }),
    };
    // Factor e^{-x lo} out so the integrand is O(1) at the left end.
    let mut r = integrate_profile_with_breaks(
        |y| Ok(f.eval(y) * (-x * (y - lo)).exp()),
        &profile,
        f.breakpoints(),
        tol,
    )?;
    let shift = (-x * lo).exp();
    r.value *= shift;
    r.error_estimate *= shift;
    Ok(r)
}

/// `||f||_{L^p(domain)}`.
pub fn lp_norm(
    f: &TestFunction,
    domain: &DomainSpec,
    p: LebesgueExponent,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    domain.validate()?;
    let range = domain.interval();
    match p.finite() {
        Some(p) => match profile_of(f, &range, p) {
            Some(profile) => {
                let r = integrate_profile_with_breaks(
                    |y| Ok(f.eval(y).abs().powf(p)),
                    &profile,
                    f.breakpoints(),
                    tol,
                )?;
                Ok(r.value.powf(1.0 / p))
            }
            None => Ok(0.0),
        },
        None => {
            let support = f.support();
            let Some(j) = support.intersect(&range) else {
                return Ok(0.0);
            };
            if j.lo == support.lo && f.singularity() > 0.0 {
                return Err(Error::Divergent(format!(
                    "{} is unbounded near {}",
                    f.label(),
                    j.lo
                )));
            }
            sup_abs(|y| Ok(f.eval(y)), j.lo, j.hi, SUP_SAMPLES)
        }
    }
}

/// Endpoint behaviour of `x -> L f(x)`: exponent at `x = 0` and decay at infinity.
fn transform_profile(f: &TestFunction) -> (f64, Decay) {
    let at_zero = match f.decay() {
        Decay::PowerLaw(beta) if beta < 1.0 => 1.0 - beta,
        _ => 0.0,
    };
    let support = f.support();
    let at_inf = if support.lo > 0.0 {
        Decay::Exponential(support.lo)
    } else {
        Decay::PowerLaw(1.0 - f.singularity())
    };
    (at_zero, at_inf)
}

/// `||L f||_{L^q(domain)}`, with the inner transforms computed to a tenth of
/// the outer tolerance (further divided by `q`).
pub fn laplace_lq_norm(
    f: &TestFunction,
    domain: &DomainSpec,
    q: LebesgueExponent,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    domain.validate()?;
    let range = domain.interval();
    let (alpha0, decay) = transform_profile(f);
    match q.finite() {
        Some(q) => {
            let inner = tol / (10.0 * q.max(1.0));
            let profile = Profile {
                lo: range.lo,
                hi: range.hi,
                left_exponent: if range.lo == 0.0 { alpha0 * q } else { 0.0 },
                tail: if range.hi.is_infinite() {
                    tail_model(decay, q)
                } else {
                    TailModel::None
                },
            };
            let r = integrate_profile(
                |x| Ok(laplace_point(f, x, inner)?.value.abs().powf(q)),
                &profile,
                tol,
            )?;
            Ok(r.value.powf(1.0 / q))
        }
        None => {
            if range.lo == 0.0 && alpha0 > 0.0 {
                return Err(Error::Divergent(format!(
                    "L {} is unbounded near 0",
                    f.label()
                )));
            }
            let inner = tol / 10.0;
            sup_abs(
                |x| Ok(laplace_point(f, x, inner)?.value),
                range.lo,
                range.hi,
                SUP_SAMPLES,
            )
        }
    }
}
