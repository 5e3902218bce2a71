//! Adaptive Gauss-Kronrod engine working in the logarithmic variable
//! `s = ln(y - lo)`.
//!
//! Every integral over `[lo, hi]` is written as `int h(s) ds` with
//! `h(s) = g(lo + e^s) e^s`. In that variable an algebraic endpoint
//! singularity `g ~ (y - lo)^(-alpha)` becomes exponential decay
//! `e^{(1 - alpha) s}` as `s -> -inf`, and a power tail `g ~ y^(-beta)` becomes
//! `e^{-(beta - 1) s}` as `s -> +inf`. Both ends are closed analytically once
//! the integrand has settled onto its declared exponent, which matters when
//! the exponent is within `1e-3` of the integrability threshold: most of the
//! mass then sits outside the range of `f64`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Integrand evaluations allowed per top-level integral.
pub const EVALUATION_BUDGET: usize = 1_000_000;

/// Beyond `t = EXP_SPAN / rate` the factor `e^{-rate t}` is below `1e-304`.
const EXP_SPAN: f64 = 700.0;
/// Width in `s` of the directly integrated middle section.
const MIDDLE_SPAN: f64 = 8.0;
/// Step in `s` between successive closure estimates.
const CLOSURE_STEP: f64 = 4.0;
/// `|s|` never exceeds this (`e^700 ~ 1e304`).
const S_LIMIT: f64 = 700.0;
/// Consecutive non-decaying dyadic windows that prove divergence.
const DIVERGENCE_STREAK: usize = 20;
/// Window ratio above which decay does not count as geometric.
const GEOMETRIC_RATIO: f64 = 0.9;
const OVERFLOW_GUARD: f64 = 1e300;
const MAX_WINDOWS: usize = 4000;

// Kronrod 15-point nodes and weights; Gauss 7-point weights on the odd nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value, error estimate and evaluation count of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Asymptotic model of the integrand at the right end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum TailModel {
    /// Nothing known (only meaningful when `hi` is finite).
    None,
    /// `g(y) ~ C y^(-beta)`.
    Power(f64),
    /// `g(y) ~ e^{-rate y}` times at most polynomial factors.
    Exponential(f64),
}

/// Integration range plus the endpoint behaviour of the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Profile {
    pub lo: f64,
    pub hi: f64,
    /// `g(lo + t) ~ t^(-alpha)` as `t -> 0`.
    pub left_exponent: f64,
    pub tail: TailModel,
}

/// Counts evaluations and rejects non-finite values.
struct Counted<F> {
    g: F,
    lo: f64,
    evaluations: usize,
    limit: usize,
    /// Known discontinuities, in the `s` variable.
    breaks: Vec<f64>,
}

impl<F: FnMut(f64) -> Result<f64>> Counted<F> {
    /// `h(s) = g(lo + e^s) e^s`.
    fn h(&mut self, s: f64) -> Result<f64> {
        self.evaluations += 1;
        let t = s.exp();
        let y = self.lo + t;
        let v = (self.g)(y)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(y));
        }
        let out = v * t;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite(y))
        }
    }

    fn exhausted(&self, estimate: f64, error: f64) -> Error {
        Error::NonConvergence {
            evaluations: self.evaluations,
            estimate,
            error,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> Result<f64>>(ctr: &mut Counted<F>, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = ctr.h(center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = ctr.h(center - dx)?;
        let f2 = ctr.h(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let width = half.abs();
    res_asc *= width;
    res_abs *= width;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        a,
        b,
        value: res_k * half,
        error,
    })
}

/// Compensated sum of panel values in order of position.
fn ordered_sum(mut panels: Vec<Panel>) -> (f64, f64) {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (mut sum, mut comp, mut err) = (0.0f64, 0.0f64, 0.0f64);
    for p in &panels {
        let t = sum + p.value;
        if sum.abs() >= p.value.abs() {
            comp += (sum - t) + p.value;
        } else {
            comp += (p.value - t) + sum;
        }
        sum = t;
        err += p.error;
    }
    (sum + comp, err)
}

/// Globally adaptive bisection on `[a, b]` in the `s` variable.
fn adaptive<F: FnMut(f64) -> Result<f64>>(
    ctr: &mut Counted<F>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if b <= a {
        return Ok((0.0, 0.0));
    }
    let pieces = ((b - a).ceil() as usize).clamp(1, 2048);
    let step = (b - a) / pieces as f64;
    let mut cuts: Vec<f64> = (1..pieces).map(|k| a + step * k as f64).collect();
    cuts.extend(ctr.breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut heap = BinaryHeap::with_capacity(cuts.len() * 4);
    let mut settled = Vec::new();
    let (mut value, mut error) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let panel = gk15(ctr, w[0], w[1])?;
        value += panel.value;
        error += panel.error;
        heap.push(panel);
    }
    loop {
        let target = (tol * value.abs()).max(f64::MIN_POSITIVE);
        if error <= target {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-13 * worst.a.abs().max(1.0)
        {
            settled.push(worst);
            continue;
        }
        if ctr.evaluations + 30 > ctr.limit {
            return Err(ctr.exhausted(value, error));
        }
        let left = gk15(ctr, worst.a, mid)?;
        let right = gk15(ctr, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    settled.extend(heap);
    Ok(ordered_sum(settled))
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Down,
    Up,
}

/// Integrates from `start` towards `-inf` (`Down`) or `+inf` (`Up`), closing
/// the remainder with `h(s) / kappa` once successive totals agree.
#[allow(clippy::too_many_arguments)]
fn closure<F: FnMut(f64) -> Result<f64>>(
    ctr: &mut Counted<F>,
    dir: Direction,
    start: f64,
    limit: f64,
    kappa: f64,
    tol: f64,
    base: f64,
) -> Result<(f64, f64)> {
    let (mut acc, mut acc_err) = (0.0, 0.0);
    let mut s = start;
    let mut previous: Option<f64> = None;
    loop {
        let estimate = acc + ctr.h(s)? / kappa;
        let total = base + estimate;
        if let Some(prev) = previous {
            let change = (estimate - prev).abs();
            // An identically zero stretch says nothing about the asymptotics.
            if total != 0.0 && change <= 0.25 * tol * total.abs() {
                return Ok((estimate, acc_err + change));
            }
        }
        previous = Some(estimate);
        let next = match dir {
            Direction::Down => s - CLOSURE_STEP,
            Direction::Up => s + CLOSURE_STEP,
        };
        let beyond = match dir {
            Direction::Down => next < limit,
            Direction::Up => next > limit,
        };
        if beyond {
            if total == 0.0 && acc == 0.0 {
                return Ok((0.0, 0.0));
            }
            return Err(ctr.exhausted(total, estimate.abs()));
        }
        let (a, b) = if next < s { (next, s) } else { (s, next) };
        let (v, e) = adaptive(ctr, a, b, 0.5 * tol)?;
        acc += v;
        acc_err += e;
        s = next;
    }
}

/// Sums dyadic windows `[c + k ln2, c + (k+1) ln2]` (or mirrored downwards)
/// and reports divergence when they stop decaying geometrically.
fn dyadic_scan<F: FnMut(f64) -> Result<f64>>(
    ctr: &mut Counted<F>,
    dir: Direction,
    c: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let ln2 = std::f64::consts::LN_2;
    let (mut sum, mut err) = (0.0f64, 0.0f64);
    let mut last: Option<f64> = None;
    let mut streak = 0usize;
    let mut small = 0usize;
    for k in 0..MAX_WINDOWS {
        let (a, b) = match dir {
            Direction::Up => (c + k as f64 * ln2, c + (k + 1) as f64 * ln2),
            Direction::Down => (c - (k + 1) as f64 * ln2, c - k as f64 * ln2),
        };
        if a.abs() > S_LIMIT || b.abs() > S_LIMIT {
            break;
        }
        let (w, e) = adaptive(ctr, a, b, 0.5 * tol)?;
        sum += w;
        err += e;
        if sum.abs() > OVERFLOW_GUARD {
            return Err(Error::Divergent(format!(
                "partial sums exceed {OVERFLOW_GUARD:e}"
            )));
        }
        if let Some(prev) = last {
            if prev != 0.0 && (w / prev).abs() > GEOMETRIC_RATIO {
                streak += 1;
            } else {
                streak = 0;
            }
        }
        if streak >= DIVERGENCE_STREAK {
            return Err(Error::Divergent(format!(
                "{DIVERGENCE_STREAK} consecutive dyadic windows without geometric decay"
            )));
        }
        if w.abs() <= 0.25 * tol * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok((sum, err + 3.0 * w.abs()));
            }
        } else {
            small = 0;
        }
        last = Some(w);
    }
    Err(ctr.exhausted(sum, err))
}

/// Integrates `g` over `profile.lo..profile.hi` to relative tolerance `tol`.
pub(crate) fn integrate_profile<F>(g: F, profile: &Profile, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_profile_with_breaks(g, profile, &[], tol)
}

/// As [`integrate_profile`], with panel boundaries forced at the points `breaks`.
pub(crate) fn integrate_profile_with_breaks<F>(
    g: F,
    profile: &Profile,
    breaks: &[f64],
    tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Profile {
        lo,
        hi,
        left_exponent,
        tail,
    } = *profile;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if lo.is_nan() || hi.is_nan() || !lo.is_finite() || lo < 0.0 || hi < lo {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let mut ctr = Counted {
        g,
        lo,
        evaluations: 0,
        limit: EVALUATION_BUDGET,
        breaks: breaks
            .iter()
            .filter(|&&y| y > lo && y < hi)
            .map(|&y| (y - lo).ln())
            .collect(),
    };
    if hi == lo {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    // Upper end of the directly integrated range, and how to treat beyond it.
    enum Right {
        Closed,
        Closure(f64),
        Scan,
    }
    let finite_top = if hi.is_finite() {
        Some((hi - lo).ln())
    } else {
        None
    };
    let exp_top = match tail {
        TailModel::Exponential(rate) if rate > 0.0 => {
            let s = (EXP_SPAN / rate).ln();
            s.is_finite().then_some(s.min(S_LIMIT))
        }
        _ => None,
    };
    let (top, right) = match (finite_top, exp_top, tail) {
        (Some(f), Some(e), _) => (f.min(e), Right::Closed),
        (Some(f), None, _) => (f, Right::Closed),
        (None, Some(e), _) => (e, Right::Closed),
        (None, None, TailModel::Power(beta)) if beta > 1.0 => (
            lo.max(1.0).ln() + 0.5 * MIDDLE_SPAN,
            Right::Closure(beta - 1.0),
        ),
        (None, None, _) => (lo.max(1.0).ln(), Right::Scan),
    };
    let bottom = top - MIDDLE_SPAN;

    let (mid_value, mid_err) = adaptive(&mut ctr, bottom, top, 0.5 * tol)?;
    let mut value = mid_value;
    let mut error = mid_err;

    let left_limit = if lo > 0.0 {
        (lo.ln() - 30.0).min(bottom - 60.0)
    } else {
        -S_LIMIT
    };
    let kappa_left = 1.0 - left_exponent;
    let (lv, le) = if kappa_left > 0.0 {
        closure(
            &mut ctr,
            Direction::Down,
            bottom,
            left_limit,
            kappa_left,
            tol,
            value,
        )?
    } else {
        dyadic_scan(&mut ctr, Direction::Down, bottom, tol)?
    };
    value += lv;
    error += le;

    let (rv, re) = match right {
        Right::Closed => (0.0, 0.0),
        Right::Closure(kappa) => closure(&mut ctr, Direction::Up, top, S_LIMIT, kappa, tol, value)?,
        Right::Scan => dyadic_scan(&mut ctr, Direction::Up, top, tol)?,
    };
    value += rv;
    error += re;

    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations: ctr.evaluations,
    })
}

/// Largest `|g|` over `[lo, hi]` from `samples` log-spaced offsets `y - lo`,
/// refined by golden-section search around the best sample.
pub(crate) fn sup_abs<F>(mut g: F, lo: f64, hi: f64, samples: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let t_max = if hi.is_finite() {
        hi - lo
    } else {
        lo.max(1.0) * 1e12
    };
    let t_min = 1e-15 * if lo > 0.0 { lo } else { t_max.min(1.0) };
    let (lmin, lmax) = (t_min.ln(), t_max.ln());
    let n = samples.max(2);
    let at = |k: usize| (lmin + (lmax - lmin) * k as f64 / (n - 1) as f64).exp();
    let mut eval = |t: f64| -> Result<f64> {
        let v = g(lo + t)?;
        if v.is_nan() {
            return Err(Error::NonFinite(lo + t));
        }
        Ok(v.abs())
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..n {
        let v = eval(at(k))?;
        if v > best.1 {
            best = (k, v);
        }
    }
    if best.1.is_infinite() {
        return Ok(best.1);
    }
    let (mut a, mut b) = (at(best.0.saturating_sub(1)), at((best.0 + 1).min(n - 1)));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    let mut sup = best.1.max(fc).max(fd);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c)?;
            sup = sup.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d)?;
            sup = sup.max(fd);
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(
        g: impl FnMut(f64) -> Result<f64>,
        lo: f64,
        hi: f64,
        alpha: f64,
        tail: TailModel,
    ) -> f64 {
        integrate_profile(
            g,
            &Profile {
                lo,
                hi,
                left_exponent: alpha,
                tail,
            },
            DEFAULT_TOL,
        )
        .unwrap()
        .value
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn smooth_finite_interval() {
        let v = run(|y| Ok(y.cos()), 0.0, 1.0, 0.0, TailModel::None);
        assert!(rel(v, 1f64.sin()) < 1e-12);
        let v = run(|y| Ok(y * y), 1.0, 2.0, 0.0, TailModel::None);
        assert!(rel(v, 7.0 / 3.0) < 1e-12);
    }

    #[test]
    fn near_threshold_left_singularity() {
        // int_0^1 y^(-0.9999) dy = 1e4; most of the mass sits below 1e-308.
        let v = run(|y| Ok(y.powf(-0.9999)), 0.0, 1.0, 0.9999, TailModel::None);
        assert!(rel(v, 1e4) < 1e-10, "{v}");
    }

    #[test]
    fn near_threshold_power_tail() {
        let v = run(
            |y| Ok(y.powf(-1.001)),
            1.0,
            f64::INFINITY,
            0.0,
            TailModel::Power(1.001),
        );
        assert!(rel(v, 1e3) < 1e-10, "{v}");
    }

    #[test]
    fn exponential_tail_with_small_rate() {
        let x = 1e-6;
        let v = run(
            |y| Ok((-x * y).exp()),
            0.0,
            f64::INFINITY,
            0.0,
            TailModel::Exponential(x),
        );
        assert!(rel(v, 1.0 / x) < 1e-10, "{v}");
    }

    #[test]
    fn exponential_tail_with_large_rate() {
        let x = 1e8;
        let v = run(
            |y| Ok((-x * y).exp()),
            0.0,
            1.0,
            0.0,
            TailModel::Exponential(x),
        );
        assert!(rel(v, 1.0 / x) < 1e-10, "{v}");
    }

    #[test]
    fn scan_flags_harmonic_tail() {
        let err = integrate_profile(
            |y| Ok(1.0 / y),
            &Profile {
                lo: 1.0,
                hi: f64::INFINITY,
                left_exponent: 0.0,
                tail: TailModel::Power(1.0),
            },
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Divergent(_)), "{err:?}");
    }

    #[test]
    fn scan_flags_non_integrable_singularity() {
        let err = integrate_profile(
            |y| Ok(1.0 / y),
            &Profile {
                lo: 0.0,
                hi: 1.0,
                left_exponent: 1.0,
                tail: TailModel::None,
            },
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Divergent(_)), "{err:?}");
    }

    #[test]
    fn scan_sums_convergent_tail_without_metadata() {
        let v = run(|y| Ok((-y).exp()), 0.0, f64::INFINITY, 0.0, TailModel::None);
        assert!(rel(v, 1.0) < 1e-9, "{v}");
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate_profile(
            |_| Ok(f64::NAN),
            &Profile {
                lo: 0.0,
                hi: 1.0,
                left_exponent: 0.0,
                tail: TailModel::None,
            },
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn rejects_bad_tolerance_and_interval() {
        let p = Profile {
            lo: 0.0,
            hi: 1.0,
            left_exponent: 0.0,
            tail: TailModel::None,
        };
        assert!(integrate_profile(|y| Ok(y), &p, 0.0).is_err());
        let bad = Profile { lo: 2.0, ..p };
        assert!(matches!(
            integrate_profile(|y| Ok(y), &bad, 1e-8),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn sup_of_decreasing_and_peaked_functions() {
        let s = sup_abs(|y| Ok((-y).exp()), 0.0, f64::INFINITY, 10_000).unwrap();
        assert!((s - 1.0).abs() < 1e-10);
        let s = sup_abs(|y| Ok(y * (-y).exp()), 0.0, f64::INFINITY, 10_000).unwrap();
        assert!((s - (-1f64).exp()).abs() < 1e-12);
    }
}
