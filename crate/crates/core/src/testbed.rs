//! The two power-law counterexample families and the incomplete gamma
//! function their transforms reduce to.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exponent::LebesgueExponent;
use crate::quadrature::{integrate_profile, Profile, TailModel, TestFunction};

/// Tolerance used for incomplete gamma values.
const GAMMA_TOL: f64 = 1e-12;

/// Which counterexample family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `y^(-(1+eps)/p)` on `[1, inf)`: mass escaping to infinity.
    Thm1,
    /// `y^(-(1-eps p)/p)` on `[0, 1]`: mass concentrating at the origin.
    Thm2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Thm1 => "thm1",
            Variant::Thm2 => "thm2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "thm1" => Ok(Variant::Thm1),
            "thm2" => Ok(Variant::Thm2),
            other => Err(Error::InvalidParameter(format!(
                "unknown family '{other}', expected thm1 or thm2"
            ))),
        }
    }
}

/// Parameters of a counterexample family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    p: f64,
    epsilon: f64,
    variant: Variant,
}

impl FamilyParams {
    /// Requires `1 < p < inf` and `0 < eps < eps_max`, where `eps_max` is 1
    /// for `Thm1` and `1/p` for `Thm2`.
    pub fn new(p: LebesgueExponent, epsilon: f64, variant: Variant) -> Result<Self> {
        let p = match p.finite() {
            Some(v) if v > 1.0 => v,
            _ => {
                return Err(Error::InvalidExponent(format!(
                    "{p} (family exponent must satisfy 1 < p < inf)"
                )))
            }
        };
        let eps_max = match variant {
            Variant::Thm1 => 1.0,
            Variant::Thm2 => 1.0 / p,
        };
        if !(epsilon > 0.0 && epsilon < eps_max) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, {eps_max}) for {variant}, got {epsilon}"
            )));
        }
        Ok(Self {
            p,
            epsilon,
            variant,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn exponent(&self) -> LebesgueExponent {
        LebesgueExponent::new(self.p).expect("validated")
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `k` in `f(y) = y^(-k)`.
    pub fn power(&self) -> f64 {
        match self.variant {
            Variant::Thm1 => (1.0 + self.epsilon) / self.p,
            Variant::Thm2 => (1.0 - self.epsilon * self.p) / self.p,
        }
    }
}

pub fn make_family(params: FamilyParams) -> TestFunction {
    let k = params.power();
    let (lo, hi) = match params.variant {
        Variant::Thm1 => (1.0, f64::INFINITY),
        Variant::Thm2 => (0.0, 1.0),
    };
    TestFunction::power(-k, lo, hi).expect("validated family parameters")
}

/// `||f||_p` in closed form.
pub fn closed_form_norm(params: FamilyParams) -> f64 {
    let FamilyParams { p, epsilon, .. } = params;
    match params.variant {
        Variant::Thm1 => epsilon.powf(-1.0 / p),
        Variant::Thm2 => (p * epsilon).powf(-1.0 / p),
    }
}

/// `Gamma(a, x) = int_x^inf s^(a-1) e^(-s) ds`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !a.is_finite() || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "incomplete gamma needs finite a and x >= 0, got a={a}, x={x}"
        )));
    }
    if x == 0.0 && a <= 0.0 {
        return Err(Error::DomainError(format!(
            "Gamma(a, 0) diverges for a = {a} <= 0"
        )));
    }
    let profile = Profile {
        lo: x,
        hi: f64::INFINITY,
        left_exponent: if x == 0.0 { (1.0 - a).max(0.0) } else { 0.0 },
        tail: TailModel::Exponential(1.0),
    };
    // e^{-x} is factored out so large x does not underflow the integrand.
    let r = integrate_profile(|s| Ok(s.powf(a - 1.0) * (x - s).exp()), &profile, GAMMA_TOL)?;
    Ok(r.value * (-x).exp())
}

/// `L f(x) = x^((1+eps)/p - 1) Gamma(1 - (1+eps)/p, x)` for the `Thm1` family.
pub fn thm1_transform_closed_form(params: FamilyParams, x: f64) -> Result<f64> {
    if params.variant != Variant::Thm1 {
        return Err(Error::InvalidParameter(
            "closed-form transform is available for thm1 only".into(),
        ));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "closed-form transform needs 0 < x <= 1, got {x}"
        )));
    }
    let k = params.power();
    Ok(x.powf(k - 1.0) * upper_incomplete_gamma(1.0 - k, x)?)
}

/// Functions in `L^p(0, inf)` used as a standard battery: both families at a
/// few `eps` (when `1 < p < inf`), `e^{-y}`, `e^{-3y}` and the indicator of `[0, 1]`.
pub fn library_families(p: LebesgueExponent) -> Vec<TestFunction> {
    let mut out = vec![
        TestFunction::exp_decay(1.0).expect("valid"),
        TestFunction::exp_decay(3.0).expect("valid"),
        TestFunction::indicator(0.0, 1.0).expect("valid"),
    ];
    for variant in [Variant::Thm1, Variant::Thm2] {
        for eps in [0.1, 0.01] {
            if let Ok(params) = FamilyParams::new(p, eps, variant) {
                out.push(make_family(params));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::quadrature::{laplace_point, lp_norm};
    use std::f64::consts::{E, PI};

    fn e(v: f64) -> LebesgueExponent {
        LebesgueExponent::new(v).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn family_values() {
        let f = make_family(FamilyParams::new(e(3.0), 0.1, Variant::Thm1).unwrap());
        assert!((f.eval(2.0) - 2f64.powf(-1.1 / 3.0)).abs() < 1e-15);
        assert!((f.eval(2.0) - 0.7756).abs() < 1e-4);
        assert_eq!(f.eval(0.5), 0.0);
        let g = make_family(FamilyParams::new(e(2.0), 0.1, Variant::Thm2).unwrap());
        assert!((g.eval(0.25) - 1.7411).abs() < 1e-4);
        assert_eq!(g.eval(2.0), 0.0);
        assert!((g.singularity() - 0.4).abs() < 1e-15);
        let h = make_family(FamilyParams::new(e(2.0), 0.37, Variant::Thm1).unwrap());
        assert_eq!(h.eval(1.0), 1.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FamilyParams::new(e(2.0), 0.5, Variant::Thm2).is_err());
        assert!(FamilyParams::new(e(2.0), 0.0, Variant::Thm1).is_err());
        assert!(FamilyParams::new(e(1.0), 0.1, Variant::Thm1).is_err());
        assert!(FamilyParams::new(LebesgueExponent::INFINITY, 0.1, Variant::Thm1).is_err());
        assert!(FamilyParams::new(e(3.0), 0.34, Variant::Thm2).is_err());
    }

    #[test]
    fn closed_form_norms() {
        let a = FamilyParams::new(e(3.0), 0.01, Variant::Thm1).unwrap();
        assert!((closed_form_norm(a) - 4.6415888).abs() < 1e-6);
        let b = FamilyParams::new(e(3.0), 0.01, Variant::Thm2).unwrap();
        assert!((closed_form_norm(b) - 3.218_297_948_685_432).abs() < 1e-12);
    }

    #[test]
    fn quadrature_norms_match_closed_forms() {
        for variant in [Variant::Thm1, Variant::Thm2] {
            for p in [1.5, 2.0, 3.0, 4.0] {
                for eps in [0.1, 0.01, 0.001] {
                    let params = FamilyParams::new(e(p), eps, variant).unwrap();
                    let n = lp_norm(&make_family(params), &DomainSpec::FullHalfLine, e(p), 1e-10)
                        .unwrap();
                    assert!(
                        rel(n, closed_form_norm(params)) < 1e-8,
                        "{variant} {p} {eps}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm1_with_zero_eps_is_not_in_lp() {
        let f = TestFunction::power(-1.0 / 3.0, 1.0, f64::INFINITY).unwrap();
        let err = lp_norm(&f, &DomainSpec::FullHalfLine, e(3.0), 1e-10).unwrap_err();
        assert!(matches!(err, Error::Divergent(_)), "{err:?}");
    }

    #[test]
    fn gamma_examples() {
        assert!((upper_incomplete_gamma(1.0, 1.0).unwrap() - 1.0 / E).abs() < 1e-12);
        assert!((upper_incomplete_gamma(0.5, 0.0).unwrap() - PI.sqrt()).abs() < 1e-11);
        assert!((upper_incomplete_gamma(2.0, 1.0).unwrap() - 2.0 / E).abs() < 1e-12);
        assert!(matches!(
            upper_incomplete_gamma(0.0, 0.0),
            Err(Error::DomainError(_))
        ));
        assert!(upper_incomplete_gamma(-0.5, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn gamma_frozen_values() {
        // 40-digit reference values.
        let cases = [
            (1.0 - 1.01 / 3.0, 0.303_881_699_848_287_04),
            (1.0 - 1.0 / 1.5, 0.256_404_988_288_733_28),
            (0.5, 0.278_805_585_280_661_98),
            (1.0 - 1.0 / 3.0, 0.304_429_447_784_158_7),
            (0.9, 0.346_884_953_751_977_8),
        ];
        for (a, want) in cases {
            let got = upper_incomplete_gamma(a, 1.0).unwrap();
            assert!(rel(got, want) < 1e-11, "a={a}: {got} vs {want}");
        }
    }

    #[test]
    fn gamma_recurrence_and_monotonicity() {
        for a in [0.3, 0.5, 0.9] {
            let mut last = f64::INFINITY;
            for x in [0.1, 1.0, 5.0] {
                let g = upper_incomplete_gamma(a, x).unwrap();
                let g1 = upper_incomplete_gamma(a + 1.0, x).unwrap();
                assert!((g1 - (a * g + x.powf(a) * (-x).exp())).abs() < 1e-10);
                assert!(g < last);
                last = g;
            }
        }
    }

    #[test]
    fn gamma_sandwich() {
        for p in [1.5, 2.0, 3.0, 10.0] {
            let g = upper_incomplete_gamma(1.0 - 1.0 / p, 1.0).unwrap();
            for c in [2.0f64, 5.0, 10.0] {
                let lower = c.powf(-1.0 / p) * ((-1f64).exp() - (-c).exp());
                assert!(lower < g && g < (-1f64).exp(), "p={p} C={c}");
            }
        }
    }

    #[test]
    fn thm1_transform_matches_quadrature() {
        let params = FamilyParams::new(e(3.0), 0.1, Variant::Thm1).unwrap();
        let closed = thm1_transform_closed_form(params, 0.5).unwrap();
        assert!(rel(closed, 0.883_550_919_890_164_2) < 1e-10);
        let quad = laplace_point(&make_family(params), 0.5, 1e-10)
            .unwrap()
            .value;
        assert!(rel(closed, quad) < 1e-8);
    }

    #[test]
    fn thm1_transform_at_one_and_lower_bound() {
        let params = FamilyParams::new(e(2.0), 1e-6, Variant::Thm1).unwrap();
        let at_one = thm1_transform_closed_form(params, 1.0).unwrap();
        assert!(rel(at_one, upper_incomplete_gamma(0.5, 1.0).unwrap()) < 1e-5);

        let params = FamilyParams::new(e(3.0), 0.1, Variant::Thm1).unwrap();
        let k = params.power();
        let g1 = upper_incomplete_gamma(1.0 - k, 1.0).unwrap();
        for x in [1e-3, 0.01, 0.1, 0.5, 1.0] {
            let v = thm1_transform_closed_form(params, x).unwrap();
            assert!(v >= x.powf(k - 1.0) * g1 * (1.0 - 1e-12));
        }
        assert!(thm1_transform_closed_form(params, 1.5).is_err());
        let thm2 = FamilyParams::new(e(3.0), 0.1, Variant::Thm2).unwrap();
        assert!(thm1_transform_closed_form(thm2, 0.5).is_err());
    }

    #[test]
    fn library_is_in_lp() {
        for p in [1.0, 2.0, 3.0] {
            let fams = library_families(e(p));
            assert_eq!(fams.len(), if p > 1.0 { 7 } else { 3 });
            for f in &fams {
                let n = lp_norm(f, &DomainSpec::FullHalfLine, e(p), 1e-10).unwrap();
                assert!(n.is_finite() && n > 0.0);
            }
        }
    }
}
