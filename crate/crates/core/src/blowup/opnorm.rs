use rayon::prelude::*;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exponent::LebesgueExponent;

const SPAN_LO: f64 = 1e-15;
const SPAN_HI: f64 = 1e15;
/// x cells per y cell.
const X_REFINEMENT: usize = 4;
const MAX_ITERS: usize = 10_000;
const MAX_HALVINGS: usize = 40;

/// `n` log-spaced cells over `[lo, hi]`: (left edges, widths).
fn cells(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (lo.ln(), hi.ln());
    let edge = |k: usize| match k {
        0 => lo,
        k if k == n => hi,
        k => (a + (b - a) * k as f64 / n as f64).exp(),
    };
    (0..n).map(|k| (edge(k), edge(k + 1) - edge(k))).unzip()
}

struct Discretization {
    /// Row-major `nx x ny`: `K[i][j] = int_{cell j} e^{-m_i y} dy`.
    kernel: Vec<f64>,
    ny: usize,
    wy: Vec<f64>,
    wx: Vec<f64>,
    p: f64,
    q: f64,
}

impl Discretization {
    fn new(p: f64, q: f64, x_lo: f64, x_hi: f64, nodes: usize) -> Self {
        let (ay, wy) = cells(SPAN_LO, SPAN_HI, nodes);
        let (ax, wx) = cells(x_lo, x_hi, X_REFINEMENT * nodes);
        let ny = nodes;
        let mut kernel = vec![0.0; ax.len() * ny];
        kernel
            .par_chunks_mut(ny)
            .zip(ax.par_iter().zip(&wx))
            .for_each(|(row, (&a, &w))| {
                let m = a + 0.5 * w;
                for (k, (&y, &h)) in row.iter_mut().zip(ay.iter().zip(&wy)) {
                    *k = (-m * y).exp() * -(-m * h).exp_m1() / m;
                }
            });
        Self {
            kernel,
            ny,
            wy,
            wx,
            p,
            q,
        }
    }

    fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.kernel
            .par_chunks(self.ny)
            .map(|row| row.iter().zip(f).map(|(k, v)| k * v).sum())
            .collect()
    }

    fn apply_transpose(&self, g: &[f64]) -> Vec<f64> {
        let ny = self.ny;
        self.kernel
            .par_chunks(ny)
            .zip(g.par_iter())
            .fold(
                || vec![0.0; ny],
                |mut acc, (row, &gi)| {
                    for (a, k) in acc.iter_mut().zip(row) {
                        *a += k * gi;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0.0; ny],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }

    /// `(sum w v^r)^(1/r)`, scaled against overflow for large `r`.
    fn norm(v: &[f64], w: &[f64], r: f64) -> f64 {
        let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let s: f64 = v
            .iter()
            .zip(w)
            .map(|(x, w)| w * (x.abs() / m).powf(r))
            .sum();
        m * s.powf(1.0 / r)
    }

    fn normalize(&self, f: &mut [f64]) {
        let n = Self::norm(f, &self.wy, self.p);
        f.iter_mut().for_each(|v| *v /= n);
    }

    /// `||K f||_q` for `||f||_p = 1`, with `K f` returned for reuse.
    fn objective(&self, f: &[f64]) -> (f64, Vec<f64>) {
        let v = self.apply(f);
        (Self::norm(&v, &self.wx, self.q), v)
    }

    /// Nonlinear power step: `f_j ~ (grad_j / w_j)^(1/(p-1))`.
    fn step(&self, v: &[f64]) -> Vec<f64> {
        let m = v.iter().fold(0.0f64, |a, x| a.max(*x));
        let g: Vec<f64> = v
            .iter()
            .zip(&self.wx)
            .map(|(x, w)| w * (x / m).powf(self.q - 1.0))
            .collect();
        let grad = self.apply_transpose(&g);
        let logs: Vec<f64> = grad
            .iter()
            .zip(&self.wy)
            .map(|(g, w)| (g.ln() - w.ln()) / (self.p - 1.0))
            .collect();
        let top = logs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut f: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        self.normalize(&mut f);
        f
    }

    fn vertex_max(&self) -> f64 {
        let nx = self.wx.len();
        (0..self.ny)
            .into_par_iter()
            .map(|j| {
                let col: Vec<f64> = (0..nx).map(|i| self.kernel[i * self.ny + j]).collect();
                Self::norm(&col, &self.wx, self.q) / self.wy[j]
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Lower bound for the norm of `L: L^p(0, inf) -> L^q(domain)`.
///
/// `f` ranges over nonnegative step functions on `nodes` log-spaced cells of
/// `[1e-15, 1e15]`; `||L f||_q` is bounded below by the midpoint rule on
/// `4 nodes` log-spaced cells of the domain (exact from below because `L f` is
/// log-convex). The ratio is maximized by a nonlinear power iteration that
/// only accepts non-decreasing steps, so the result is nondecreasing in
/// `iters` and, on nested grids, in `nodes`. For `p = 1` the maximum over the
/// cell indicators is exact.
pub fn discretized_opnorm(
    p: LebesgueExponent,
    q: LebesgueExponent,
    domain: &DomainSpec,
    nodes: usize,
    iters: usize,
) -> Result<f64> {
    let (Some(pv), Some(qv)) = (p.finite(), q.finite()) else {
        return Err(Error::InvalidExponent(
            "operator-norm probe needs finite p and q".into(),
        ));
    };
    if nodes < 16 {
        return Err(Error::InvalidParameter(format!(
            "at least 16 nodes are required, got {nodes}"
        )));
    }
    if iters == 0 {
        return Err(Error::InvalidParameter("iters must be positive".into()));
    }
    domain.validate()?;
    let (lo, hi) = domain.bounds();
    let (x_lo, x_hi) = (lo.max(SPAN_LO), hi.min(SPAN_HI));
    if !(x_lo < x_hi) {
        return Err(Error::InvalidDomain(format!(
            "{domain} does not meet [{SPAN_LO:e}, {SPAN_HI:e}]"
        )));
    }
    let disc = Discretization::new(pv, qv, x_lo, x_hi, nodes);
    if pv == 1.0 {
        return Ok(disc.vertex_max());
    }

    // Start from the y^(-1/p) profile that the extremals approach.
    let (ay, wy) = cells(SPAN_LO, SPAN_HI, nodes);
    let mut f: Vec<f64> = ay
        .iter()
        .zip(&wy)
        .map(|(a, w)| (a * (a + w)).sqrt().powf(-1.0 / pv))
        .collect();
    disc.normalize(&mut f);
    let (mut best, mut v) = disc.objective(&f);
    let iters = iters.min(MAX_ITERS);
    let (mut last_gain, mut prev_gain) = (0.0, 0.0);
    for _ in 0..iters {
        let target = disc.step(&v);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut cand: Vec<f64> = f
                .iter()
                .zip(&target)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect();
            disc.normalize(&mut cand);
            let (val, kv) = disc.objective(&cand);
            if val >= best {
                accepted = Some((cand, val, kv));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, val, kv)) = accepted else {
            break;
        };
        prev_gain = last_gain;
        last_gain = val - best;
        f = cand;
        v = kv;
        best = val;
        if last_gain <= 1e-15 * best {
            break;
        }
    }
    if iters == MAX_ITERS && last_gain > 1e-9 * best && last_gain >= prev_gain {
        return Err(Error::NonConvergence {
            evaluations: MAX_ITERS,
            estimate: best,
            error: last_gain,
        });
    }
    Ok(best)
}
