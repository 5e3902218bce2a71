//! Explicit estimates: the pointwise Hölder bound, admissible constants for
//! the local and tail inequalities, dilation identities and the lower bounds
//! carried by the counterexample families.

use rayon::prelude::*;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exponent::LebesgueExponent;
use crate::quadrature::{laplace_lq_norm, laplace_point, lp_norm, TestFunction};
use crate::testbed::upper_incomplete_gamma;

/// Denominator floor for relative errors between underflowed values.
const REL_FLOOR: f64 = 1e-280;

/// Relative deviation `|a - b| / max(|a|, |b|)`, safe for tiny values.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(REL_FLOOR);
    (a - b).abs() / scale
}

/// `t^(1/t)` for the conjugate `t = p'`, with the value 1 at `t = inf`.
fn conj_power(p: LebesgueExponent) -> f64 {
    match p.conjugate().finite() {
        Some(t) => t.powf(1.0 / t),
        None => 1.0,
    }
}

/// Upper bound for `|L f(x)|` from Hölder: `||f||_p / (p'^(1/p') x^(1/p'))`.
pub fn holder_pointwise_bound(p: LebesgueExponent, norm_f: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "x must be positive, got {x}"
        )));
    }
    if !(norm_f >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "norm must be nonnegative, got {norm_f}"
        )));
    }
    // 1/p' = 1 - 1/p.
    let inv_conj = 1.0 - p.reciprocal();
    Ok(norm_f / (conj_power(p) * x.powf(inv_conj)))
}

/// Whether `L f(x)` stays below the Hölder bound (relaxed by `1 + tol`) at every `x`.
pub fn check_holder(f: &TestFunction, p: LebesgueExponent, xs: &[f64], tol: f64) -> Result<bool> {
    let norm = lp_norm(f, &DomainSpec::FullHalfLine, p, 1e-10)?;
    let verdicts: Result<Vec<bool>> = xs
        .par_iter()
        .map(|&x| {
            let v = laplace_point(f, x, 1e-10)?.value;
            Ok(v <= holder_pointwise_bound(p, norm, x)? * (1.0 + tol))
        })
        .collect();
    Ok(verdicts?.into_iter().all(|ok| ok))
}

/// `f_lambda(x) = f(lambda x)`.
pub fn scale(f: &TestFunction, lambda: f64) -> Result<TestFunction> {
    f.dilate(lambda)
}

/// Outcome of [`check_scaling_identity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    pub lambda: f64,
    /// Largest relative gap between `L f_lambda(x)` and `L f(x / lambda) / lambda`.
    pub max_identity_error: f64,
    /// `| ||f_lambda||_p lambda^(1/p) / ||f||_p - 1 |`.
    pub norm_ratio_error: f64,
    /// `||L f_lambda||_q >= lambda^(1/q - 1) ||L f||_q` on the matching domain.
    pub lq_lower_bound_satisfied: bool,
}

/// 33 log-spaced points per decade over `[1e-3, 1e3]`.
pub fn scaling_grid() -> Vec<f64> {
    let n = 6 * 33;
    (0..=n)
        .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / n as f64))
        .collect()
}

/// Checks the dilation identities for `f` at `lambda`.
///
/// The `L^q` lower bound is taken on `[0, 1]` when `lambda < 1` and on
/// `[1, inf)` when `lambda > 1` (trivially satisfied at `lambda = 1`).
pub fn check_scaling_identity(
    f: &TestFunction,
    lambda: f64,
    p: LebesgueExponent,
    q: LebesgueExponent,
    xs: &[f64],
    tol: f64,
) -> Result<ScalingReport> {
    let f_lambda = scale(f, lambda)?;
    let errors: Result<Vec<f64>> = xs
        .par_iter()
        .map(|&x| {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "sample point must be positive, got {x}"
                )));
            }
            let lhs = laplace_point(&f_lambda, x, tol)?.value;
            let rhs = laplace_point(f, x / lambda, tol)?.value / lambda;
            Ok(relative_error(lhs, rhs))
        })
        .collect();
    let max_identity_error = errors?.into_iter().fold(0.0, f64::max);

    let full = DomainSpec::FullHalfLine;
    let norm = lp_norm(f, &full, p, tol)?;
    let norm_lambda = lp_norm(&f_lambda, &full, p, tol)?;
    let norm_ratio_error = (norm_lambda * lambda.powf(p.reciprocal()) / norm - 1.0).abs();

    let domain = if lambda < 1.0 {
        Some(DomainSpec::Bounded { a: 0.0, b: 1.0 })
    } else if lambda > 1.0 {
        Some(DomainSpec::Tail { s: 1.0 })
    } else {
        None
    };
    let lq_lower_bound_satisfied = match domain {
        Some(d) => {
            let lhs = laplace_lq_norm(&f_lambda, &d, q, tol)?;
            let rhs = lambda.powf(q.reciprocal() - 1.0) * laplace_lq_norm(f, &d, q, tol)?;
            lhs >= rhs * (1.0 - 1e-6)
        }
        None => true,
    };

    Ok(ScalingReport {
        lambda,
        max_identity_error,
        norm_ratio_error,
        lq_lower_bound_satisfied,
    })
}

fn family_exponents(p: LebesgueExponent, epsilon: f64) -> Result<(f64, f64)> {
    let pv = match p.finite() {
        Some(v) if v > 1.0 => v,
        _ => {
            return Err(Error::InvalidExponent(format!(
                "{p} (lower bounds need 1 < p < inf)"
            )))
        }
    };
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok((pv, pv / (pv - 1.0)))
}

/// `(p-1)^(1/q) eps^(-1/q) Gamma(1 - (1+eps)/p, 1)` with `q = p'`: a lower
/// bound for `||L f||_{L^q(0,1)}` on the family escaping to infinity.
pub fn thm1_lower_bound(p: LebesgueExponent, epsilon: f64) -> Result<f64> {
    let (p, q) = family_exponents(p, epsilon)?;
    let g = upper_incomplete_gamma(1.0 - (1.0 + epsilon) / p, 1.0)?;
    Ok((p - 1.0).powf(1.0 / q) * epsilon.powf(-1.0 / q) * g)
}

/// `p / (e((1+eps)p - 1)) (int_1^inf x^(q(a - 1)) dx)^(1/q)` with
/// `a = (1 - eps p)/p` and `q = p'`: a lower bound for `||L f||_{L^q(1,inf)}`
/// on the family concentrating at the origin.
pub fn thm2_lower_bound(p: LebesgueExponent, epsilon: f64) -> Result<f64> {
    let (p, q) = family_exponents(p, epsilon)?;
    if epsilon * p >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be below 1/p = {}, got {epsilon}",
            1.0 / p
        )));
    }
    let alpha = (1.0 - epsilon * p) / p;
    let exponent = q * (alpha - 1.0);
    if exponent >= -1.0 {
        return Err(Error::DomainError(format!(
            "x^{exponent} is not integrable on [1, inf)"
        )));
    }
    let integral = 1.0 / (-1.0 - exponent);
    let constant = p / (std::f64::consts::E * ((1.0 + epsilon) * p - 1.0));
    Ok(constant * integral.powf(1.0 / q))
}

/// A constant that is either finite or does not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constant {
    Finite(f64),
    Divergent,
}

impl Constant {
    pub fn finite(self) -> Option<f64> {
        match self {
            Constant::Finite(c) => Some(c),
            Constant::Divergent => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Constant::Finite(_))
    }
}

/// `q / p'`, with `q = inf` giving infinity unless `p = 1`.
fn q_over_conj(p: LebesgueExponent, q: LebesgueExponent) -> f64 {
    let inv_conj = 1.0 - p.reciprocal();
    match q.finite() {
        Some(q) => q * inv_conj,
        None if inv_conj == 0.0 => 0.0,
        None => f64::INFINITY,
    }
}

/// `C` with `||L f||_{L^q(0,1)} <= C ||f||_p`, from integrating the Hölder
/// bound: `(1 / (1 - q/p'))^(1/q) / p'^(1/p')` when `q/p' < 1`.
pub fn local_constant(p: LebesgueExponent, q: LebesgueExponent) -> Constant {
    let r = q_over_conj(p, q);
    match q.finite() {
        Some(qv) if r < 1.0 => Constant::Finite((1.0 / (1.0 - r)).powf(1.0 / qv) / conj_power(p)),
        _ => Constant::Divergent,
    }
}

/// `C` with `||L f||_{L^q(1,inf)} <= C ||f||_p`: `(1 / (q/p' - 1))^(1/q) / p'^(1/p')`
/// when `q/p' > 1`, and `1 / p'^(1/p')` for `q = inf`.
pub fn tail_constant(p: LebesgueExponent, q: LebesgueExponent) -> Constant {
    let r = q_over_conj(p, q);
    if !(r > 1.0) {
        return Constant::Divergent;
    }
    match q.finite() {
        Some(qv) => Constant::Finite((1.0 / (r - 1.0)).powf(1.0 / qv) / conj_power(p)),
        None => Constant::Finite(1.0 / conj_power(p)),
    }
}
