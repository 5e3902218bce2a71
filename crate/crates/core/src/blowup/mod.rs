//! Growth of `||L f_eps||_q / ||f_eps||_p` along the counterexample families,
//! log-log fits of that growth, and a discretized operator-norm probe.

mod opnorm;

pub use opnorm::discretized_opnorm;

use rayon::prelude::*;

use crate::analytics::relative_error;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exponent::{on_duality_line, LebesgueExponent};
use crate::quadrature::{laplace_lq_norm, lp_norm};
use crate::testbed::{closed_form_norm, make_family, FamilyParams, Variant};

/// Quadrature tolerance used for every sweep norm.
pub const SWEEP_TOL: f64 = 1e-10;
/// Slope at or below which a sweep is read as blowup.
pub const BLOWUP_SLOPE: f64 = -0.1;

/// One point of an `eps` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub norm_f: f64,
    pub norm_lf: f64,
    pub ratio: f64,
}

/// A sweep point whose norms could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub epsilon: f64,
    pub error: Error,
}

/// Records in the order of the requested grid, plus the failed points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<SweepFailure>,
}

impl Sweep {
    pub fn has_divergence(&self) -> bool {
        self.failures
            .iter()
            .any(|f| matches!(f.error, Error::Divergent(_)))
    }
}

/// `count` points from `start` to `end` in geometric progression.
pub fn geometric_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) || count < 2 {
        return Err(Error::InvalidParameter(format!(
            "geometric grid needs positive endpoints and at least 2 points, got {start}:{end}:{count}"
        )));
    }
    let (a, b) = (start.ln(), end.ln());
    Ok((0..count)
        .map(|k| {
            if k + 1 == count {
                end
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// `eps = 10^-1, 10^-1.5, ..., 10^-4`.
pub fn standard_grid() -> Vec<f64> {
    (0..7).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect()
}

fn record(
    params: FamilyParams,
    q: LebesgueExponent,
    domain: &DomainSpec,
    check_closed_form: bool,
) -> Result<SweepRecord> {
    let f = make_family(params);
    let norm_f = lp_norm(&f, &DomainSpec::FullHalfLine, params.exponent(), SWEEP_TOL)?;
    if check_closed_form {
        let exact = closed_form_norm(params);
        let dev = relative_error(norm_f, exact);
        if dev > 1e-8 {
            return Err(Error::NonConvergence {
                evaluations: 0,
                estimate: norm_f,
                error: dev * exact,
            });
        }
    }
    let norm_lf = laplace_lq_norm(&f, domain, q, SWEEP_TOL)?;
    Ok(SweepRecord {
        epsilon: params.epsilon(),
        norm_f,
        norm_lf,
        ratio: norm_lf / norm_f,
    })
}

/// Computes `||f_eps||_p` and `||L f_eps||_{L^q(domain)}` for every `eps`.
///
/// Points are independent and run in parallel; a failed point is reported in
/// [`Sweep::failures`] without stopping the others.
pub fn sweep(
    p: LebesgueExponent,
    q: LebesgueExponent,
    domain: &DomainSpec,
    variant: Variant,
    eps_grid: &[f64],
) -> Result<Sweep> {
    domain.validate()?;
    if eps_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter(
            "epsilon grid must be strictly decreasing".into(),
        ));
    }
    let params = eps_grid
        .iter()
        .map(|&eps| FamilyParams::new(p, eps, variant))
        .collect::<Result<Vec<_>>>()?;
    let on_line = on_duality_line(p, q);
    let results: Vec<_> = params
        .par_iter()
        .map(|&prm| {
            record(prm, q, domain, on_line).map_err(|error| SweepFailure {
                epsilon: prm.epsilon(),
                error,
            })
        })
        .collect();
    let mut out = Sweep::default();
    for r in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(fail) => out.failures.push(fail),
        }
    }
    Ok(out)
}

/// Least-squares line through `(ln eps, ln ratio)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    /// Sorted by decreasing `eps`.
    pub records: Vec<SweepRecord>,
    /// `2/p - 1`.
    pub theoretical_slope: f64,
}

pub fn fit_exponent(records: &[SweepRecord], p: LebesgueExponent) -> Result<BlowupFit> {
    let mut records = records.to_vec();
    if records.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 records, got {}",
            records.len()
        )));
    }
    if records
        .iter()
        .any(|r| !(r.epsilon > 0.0 && r.ratio > 0.0 && r.ratio.is_finite()))
    {
        return Err(Error::InsufficientData(
            "records need positive epsilon and finite positive ratio".into(),
        ));
    }
    records.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let decades = (records[0].epsilon / records[records.len() - 1].epsilon).log10();
    if decades < 2.0 - 1e-9 {
        return Err(Error::InsufficientData(format!(
            "epsilon spans {decades:.3} decades, need 2"
        )));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.epsilon.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.ratio.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    Ok(BlowupFit {
        slope,
        intercept,
        max_residual,
        records,
        theoretical_slope: 2.0 * p.reciprocal() - 1.0,
    })
}

/// Reads a sweep as evidence of discontinuity: some point diverged, or the
/// fitted slope is at most [`BLOWUP_SLOPE`].
pub fn empirically_discontinuous(sweep: &Sweep, p: LebesgueExponent) -> Result<bool> {
    if sweep.has_divergence() {
        return Ok(true);
    }
    if let Some(f) = sweep.failures.first() {
        return Err(f.error.clone());
    }
    Ok(fit_exponent(&sweep.records, p)?.slope <= BLOWUP_SLOPE)
}
