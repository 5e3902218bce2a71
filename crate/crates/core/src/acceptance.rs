//! The end-to-end acceptance suite, shared by the `acceptance` test target
//! and the `verify-all` command.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analytics::{
    check_holder, check_scaling_identity, local_constant, relative_error, scaling_grid,
    tail_constant,
};
use crate::blowup::{
    discretized_opnorm, empirically_discontinuous, fit_exponent, standard_grid, sweep,
};
use crate::classify::{classify, region_sweep};
use crate::domain::DomainSpec;
use crate::error::Result;
use crate::exponent::LebesgueExponent;
use crate::quadrature::{laplace_lq_norm, laplace_point, lp_norm, TestFunction};
use crate::testbed::{
    closed_form_norm, library_families, make_family, upper_incomplete_gamma, FamilyParams, Variant,
};

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "closed-form transforms"),
    (2, "family norms"),
    (3, "pointwise Hölder bound"),
    (4, "dilation identities"),
    (5, "explicit constants"),
    (6, "incomplete gamma sandwich"),
    (7, "blowup exponents"),
    (8, "classifier vs sweeps"),
    (9, "operator-norm probe"),
    (10, "region diagrams"),
];

type Check = (bool, String);

fn e(v: f64) -> LebesgueExponent {
    LebesgueExponent::new(v).expect("valid exponent")
}

fn unit() -> DomainSpec {
    DomainSpec::Bounded { a: 0.0, b: 1.0 }
}

fn tail() -> DomainSpec {
    DomainSpec::Tail { s: 1.0 }
}

fn closed_form_transforms() -> Result<Check> {
    let start = Instant::now();
    type Exact = fn(f64) -> f64;
    let power = |k: f64| TestFunction::power(k, 0.0, f64::INFINITY);
    let cases: Vec<(TestFunction, Exact)> = vec![
        (TestFunction::constant(1.0), |x| 1.0 / x),
        (TestFunction::exp_decay(1.0)?, |x| 1.0 / (1.0 + x)),
        (TestFunction::exp_decay(3.0)?, |x| 1.0 / (3.0 + x)),
        (TestFunction::exp_decay(0.5)?, |x| 1.0 / (0.5 + x)),
        (TestFunction::indicator(0.0, 1.0)?, |x| -(-x).exp_m1() / x),
        (power(-0.5)?, |x| PI.sqrt() / x.sqrt()),
        (power(0.5)?, |x| 0.5 * PI.sqrt() / x.powf(1.5)),
        (power(1.0)?, |x| 1.0 / (x * x)),
        (power(2.0)?, |x| 2.0 / (x * x * x)),
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (f, exact) in &cases {
        for x in [0.5, 1.0, 4.0] {
            let v = laplace_point(f, x, 1e-10)?.value;
            worst = worst.max(relative_error(v, exact(x)));
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-8 && secs < 5.0,
        format!("{count} pairs, max rel err {worst:.2e}, {secs:.2}s (limit 5s)"),
    ))
}

fn family_norms() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for variant in [Variant::Thm1, Variant::Thm2] {
        for p in [2.0, 2.5, 3.0, 4.0] {
            for eps in [1e-1, 1e-2, 1e-3] {
                let params = FamilyParams::new(e(p), eps, variant)?;
                let n = lp_norm(&make_family(params), &DomainSpec::FullHalfLine, e(p), 1e-10)?;
                worst = worst.max(relative_error(n, closed_form_norm(params)));
            }
        }
    }
    Ok((worst <= 1e-8, format!("24 norms, max rel err {worst:.2e}")))
}

fn holder_bound() -> Result<Check> {
    let xs: Vec<f64> = (0..33)
        .map(|k| 10f64.powf(-4.0 + 0.25 * k as f64))
        .collect();
    let mut checked = 0;
    let mut failed = Vec::new();
    for p in [
        e(1.0),
        e(1.5),
        e(2.0),
        e(3.0),
        e(4.0),
        LebesgueExponent::INFINITY,
    ] {
        for f in library_families(p) {
            checked += 1;
            if !check_holder(&f, p, &xs, 1e-8)? {
                failed.push(format!("{} (p={p})", f.label()));
            }
        }
    }
    Ok((
        failed.is_empty(),
        format!(
            "{checked} functions x 33 points, {} violations {failed:?}",
            failed.len()
        ),
    ))
}

fn dilation_identities() -> Result<Check> {
    let xs = scaling_grid();
    let (p, q) = (e(3.0), e(1.5));
    let (mut identity, mut ratio) = (0.0f64, 0.0f64);
    let mut lower_ok = true;
    for f in library_families(p) {
        for lambda in [0.125, 0.5, 2.0, 8.0] {
            let r = check_scaling_identity(&f, lambda, p, q, &xs, 1e-10)?;
            identity = identity.max(r.max_identity_error);
            ratio = ratio.max(r.norm_ratio_error);
            lower_ok &= r.lq_lower_bound_satisfied;
        }
    }
    Ok((
        identity <= 1e-8 && ratio <= 1e-8 && lower_ok,
        format!(
            "transform err {identity:.2e}, norm err {ratio:.2e}, L^q lower bounds {}",
            if lower_ok { "hold" } else { "violated" }
        ),
    ))
}

fn explicit_constants() -> Result<Check> {
    let grid = [0.1, 0.3, 0.55, 0.8];
    let mut pairs = Vec::new();
    for &ip in &grid {
        for &iq in &grid {
            pairs.push((
                LebesgueExponent::from_reciprocal(ip)?,
                LebesgueExponent::from_reciprocal(iq)?,
            ));
        }
    }
    let results: Vec<Result<(usize, Vec<String>)>> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let mut checks = 0;
            let mut bad = Vec::new();
            let local = local_constant(p, q).finite();
            let tail_c = tail_constant(p, q).finite();
            if local.is_none() && tail_c.is_none() {
                return Ok((0, bad));
            }
            for f in library_families(p) {
                let nf = lp_norm(&f, &DomainSpec::FullHalfLine, p, 1e-10)?;
                if let Some(c) = local {
                    checks += 1;
                    if laplace_lq_norm(&f, &unit(), q, 1e-10)? > c * nf * (1.0 + 1e-6) {
                        bad.push(format!("local p={p} q={q} {}", f.label()));
                    }
                }
                if let Some(c) = tail_c {
                    checks += 1;
                    if laplace_lq_norm(&f, &tail(), q, 1e-10)? > c * nf * (1.0 + 1e-6) {
                        bad.push(format!("tail p={p} q={q} {}", f.label()));
                    }
                }
            }
            Ok((checks, bad))
        })
        .collect();
    let mut checks = 0;
    let mut bad = Vec::new();
    for r in results {
        let (c, b) = r?;
        checks += c;
        bad.extend(b);
    }
    Ok((
        bad.is_empty() && checks > 0,
        format!("{checks} inequalities, {} violations {bad:?}", bad.len()),
    ))
}

fn gamma_sandwich() -> Result<Check> {
    let mut bad = Vec::new();
    for p in [1.5, 2.0, 3.0, 10.0] {
        let g = upper_incomplete_gamma(1.0 - 1.0 / p, 1.0)?;
        for c in [2.0f64, 5.0, 10.0] {
            let lower = c.powf(-1.0 / p) * ((-1f64).exp() - (-c).exp());
            if !(lower < g && g < (-1f64).exp()) {
                bad.push((p, c));
            }
        }
    }
    Ok((bad.is_empty(), format!("12 cases, failures {bad:?}")))
}

fn blowup_exponents() -> Result<Check> {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [2.0, 2.5, 3.0, 4.0] {
        let q = e(p).conjugate();
        for (variant, domain) in [(Variant::Thm1, unit()), (Variant::Thm2, tail())] {
            let s = sweep(e(p), q, &domain, variant, &standard_grid())?;
            if let Some(fail) = s.failures.first() {
                return Err(fail.error.clone());
            }
            let fit = fit_exponent(&s.records, e(p))?;
            let dev = (fit.slope - fit.theoretical_slope).abs();
            ok &= dev <= 0.05;
            lines.push(format!("{variant} p={p}: {:+.4}", fit.slope));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        ok && secs < 60.0,
        format!("{} ({secs:.1}s, limit 60s)", lines.join(", ")),
    ))
}

/// Grid used to compare classifier verdicts with sweeps.
pub fn near_duality_grid() -> Vec<(LebesgueExponent, LebesgueExponent)> {
    let mut out = Vec::new();
    for p in [1.5, 2.0, 2.5, 3.0, 4.0] {
        for delta in [-0.1, -0.05, 0.0, 0.05, 0.1] {
            // Exact conjugate on the line itself.
            let q = if delta == 0.0 {
                e(p).conjugate()
            } else {
                LebesgueExponent::from_reciprocal(1.0 - 1.0 / p + delta).expect("inside (0, 1)")
            };
            out.push((e(p), q));
        }
    }
    out
}

fn classifier_consistency() -> Result<Check> {
    let grid = near_duality_grid();
    let configs: Vec<_> = grid
        .iter()
        .flat_map(|&(p, q)| [(p, q, Variant::Thm1, unit()), (p, q, Variant::Thm2, tail())])
        .collect();
    let results: Vec<Result<Option<String>>> = configs
        .par_iter()
        .map(|&(p, q, variant, domain)| {
            let s = sweep(p, q, &domain, variant, &standard_grid())?;
            let empirical = empirically_discontinuous(&s, p)?;
            let verdict = classify(p, q, &domain)?;
            Ok((empirical == verdict.continuous).then(|| {
                format!(
                    "{domain} p={p} q={q}: classifier {} vs empirical {}",
                    verdict.continuous, !empirical
                )
            }))
        })
        .collect();
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    Ok((
        mismatches.is_empty(),
        format!(
            "{} configurations, {} disagreements {mismatches:?}",
            configs.len(),
            mismatches.len()
        ),
    ))
}

fn opnorm_probe() -> Result<Check> {
    let hilbert = discretized_opnorm(e(2.0), e(2.0), &DomainSpec::FullHalfLine, 512, 10_000)?;
    let l1 = discretized_opnorm(e(1.0), e(1e4), &DomainSpec::FullHalfLine, 512, 1)?;
    Ok((
        (1.755..=1.7725).contains(&hilbert) && (l1 - 1.0).abs() <= 0.01,
        format!("(2,2): {hilbert:.6} in [1.755, 1.7725]; (1,1e4): {l1:.6} within 1% of 1"),
    ))
}

/// Membership on the `1/16` lattice, indexed by `i = 16/p`, `j = 16/q`.
pub fn figure_truth(domain: &DomainSpec, i: u32, j: u32) -> bool {
    let on_line_included = i + j == 16 && i >= 8;
    match domain {
        DomainSpec::Bounded { .. } => i + j > 16 || on_line_included,
        DomainSpec::Tail { .. } => i + j < 16 || on_line_included,
        DomainSpec::FullHalfLine => on_line_included,
    }
}

fn region_diagrams() -> Result<Check> {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for domain in [unit(), tail()] {
        for pt in region_sweep(1.0 / 16.0, &domain)? {
            let i = (pt.inv_p * 16.0).round() as u32;
            let j = (pt.inv_q * 16.0).round() as u32;
            total += 1;
            if pt.verdict.continuous != figure_truth(&domain, i, j) {
                mismatches.push(format!("{domain} ({i}/16, {j}/16)"));
            }
        }
    }
    Ok((
        mismatches.is_empty() && total == 2 * 289,
        format!(
            "{total} lattice points, {} mismatches {mismatches:?}",
            mismatches.len()
        ),
    ))
}

/// Runs criterion `id` (1 to 10).
pub fn run_criterion(id: u8) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let start = Instant::now();
    let result = match id {
        1 => closed_form_transforms(),
        2 => family_norms(),
        3 => holder_bound(),
        4 => dilation_identities(),
        5 => explicit_constants(),
        6 => gamma_sandwich(),
        7 => blowup_exponents(),
        8 => classifier_consistency(),
        9 => opnorm_probe(),
        10 => region_diagrams(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|err| (false, format!("error: {err}")));
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id)).collect()
}
