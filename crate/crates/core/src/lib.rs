//! Numerical study of the Laplace transform `L f(x) = int_0^inf f(y) e^{-xy} dy`
//! as an operator between Lebesgue spaces on the half-line.
//!
//! The crate combines an exact classifier of which `(p, q, domain)` triples
//! make `L` bounded with the numerics needed to check every estimate behind
//! that classification: singularity-aware quadrature, the explicit Hölder and
//! scaling bounds, the power-law counterexample families, and the empirical
//! `eps^(2/p - 1)` blowup of their norm ratios.

pub mod acceptance;
pub mod analytics;
pub mod blowup;
pub mod classify;
pub mod domain;
pub mod error;
pub mod exponent;
pub mod quadrature;
pub mod testbed;

pub use analytics::{
    check_holder, check_scaling_identity, holder_pointwise_bound, local_constant, scale,
    tail_constant, thm1_lower_bound, thm2_lower_bound, Constant, ScalingReport,
};
pub use blowup::{
    discretized_opnorm, fit_exponent, geometric_grid, sweep, BlowupFit, Sweep, SweepFailure,
    SweepRecord,
};
pub use classify::{classify, region_sweep, ContinuityVerdict, Reason, RegionPoint};
pub use domain::{DomainSpec, Interval};
pub use error::{Error, Result};
pub use exponent::{conjugate, LebesgueExponent};
pub use quadrature::{
    integrate, laplace_lq_norm, laplace_point, lp_norm, Decay, QuadratureResult, TestFunction,
};
pub use testbed::{
    closed_form_norm, make_family, thm1_transform_closed_form, upper_incomplete_gamma,
    FamilyParams, Variant,
};
