//! Secrecy metrics of the hybrid link against an α-μ eavesdropper.

use crate::channels::{FsoLinkParams, RfChannelParams};
use crate::cun::PowerConstraints;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Full scenario: three RF links, the FSO link, the power constraints and the
/// target secrecy rate Υ_e in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyConfig<T = f64> {
    pub rf_sr: RfChannelParams<T>,
    pub rf_sp: RfChannelParams<T>,
    pub rf_se: RfChannelParams<T>,
    pub fso: FsoLinkParams<T>,
    pub pc: PowerConstraints<T>,
    pub target_rate: T,
}

impl<T: Real> SecrecyConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.rf_sr.validate()?;
        self.rf_sp.validate()?;
        self.rf_se.validate()?;
        self.fso.validate()?;
        self.pc.validate()?;
        if !(self.target_rate >= T::zero()) || !self.target_rate.is_finite() {
            return Err(Error::param("target_rate", format!("{} must be finite and non-negative", self.target_rate)));
        }
        Ok(())
    }

    /// σ = 2^{Υ_e} ≥ 1.
    pub fn sigma(&self) -> T {
        lit::<T>(2.0).powf(self.target_rate)
    }

    pub fn with_target_rate(mut self, rate: T) -> Self {
        self.target_rate = rate;
        self
    }
}

pub mod oracle;
mod terms;

pub use terms::{im_terms, im_terms_with, r_terms, r_terms_with, ImTerms, RTerms};

use crate::channels::alpha_mu_pdf;
use crate::cun::{cdf_hybrid_with, Scenario};
use crate::quad::integrate_half_line;
use crate::series::SeriesPolicy;
use crate::specfun::ContourPolicy;

/// Which secrecy metric a result holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Lower bound of the secrecy outage probability.
    SopLower,
    /// Probability of strictly positive secrecy capacity.
    Spsc,
    /// Effective secrecy throughput in bits/s/Hz.
    Est,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::SopLower => "sop",
            MetricKind::Spsc => "spsc",
            MetricKind::Est => "est",
        }
    }
}

/// How the SOP lower bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Sum of closed-form integral terms.
    ClosedForm,
    /// Adaptive quadrature of `∫ F_{γf}(σγ) f_{γe}(γ) dγ`, used when the closed
    /// form does not cover the parameters.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyResult<T = f64> {
    pub value: T,
    pub kind: MetricKind,
    pub scenario: Scenario,
    pub route: Route,
    /// Special-function evaluations (closed form) or integrand evaluations (quadrature).
    pub evaluations: usize,
    /// Absolute error estimate of the underlying SOP lower bound.
    pub error_bound: T,
    /// True when roundoff pushed the SOP outside [0, 1] and it was clamped.
    pub clamped: bool,
}

/// Clamps excursions out of [0, 1] up to 1e-9; larger ones are integrity errors.
fn clamp_probability<T: Real>(what: &str, p: T) -> Result<(T, bool)> {
    let slack = lit::<T>(1e-9);
    if !p.is_finite() || p < -slack || p > T::one() + slack {
        return Err(Error::Integrity { what: what.to_string(), value: p.to_f64_lossy() });
    }
    let c = p.max(T::zero()).min(T::one());
    if c != p {
        log::debug!("{what}: clamped {p} into [0, 1]");
    }
    Ok((c, c != p))
}

/// `∫₀^∞ F_{γf}(σγ) f_{γe}(γ) dγ` by adaptive quadrature.
pub fn sop_lower_quadrature<T: Real>(
    cfg: &SecrecyConfig<T>,
    sp: &SeriesPolicy<T>,
    policy: &ContourPolicy<T>,
) -> Result<(T, usize, T)> {
    cfg.validate()?;
    let sigma = cfg.sigma();
    let cdf = |x: T| cdf_hybrid_with(cfg, x, sp, policy);
    let failure = std::cell::RefCell::new(None);
    let f = |g: T| -> T {
        if failure.borrow().is_some() || g == T::zero() {
            return T::zero();
        }
        match cdf(sigma * g).and_then(|c| Ok(c * alpha_mu_pdf(&cfg.rf_se, g)?)) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                T::zero()
            }
        }
    };
    let tol = sp.tolerance.max(lit(1e-10));
    let q = integrate_half_line(f, cfg.rf_se.phi(), tol)?;
    if let Some(e) = failure.into_inner() {
        return Err(e.context("sop_lower_quadrature"));
    }
    Ok((q.value, q.evaluations, q.error))
}

fn sop_closed<T: Real>(cfg: &SecrecyConfig<T>, scenario: Scenario, policy: &ContourPolicy<T>) -> Result<(T, usize, T)> {
    match scenario {
        Scenario::Interference => {
            let t = im_terms_with(cfg, policy)?;
            Ok((t.sop(cfg.fso.blockage_p), t.evaluations, t.c_e * t.error))
        }
        Scenario::DoubleConstraint => {
            let t = r_terms_with(cfg, policy)?;
            Ok((t.sop(cfg.fso.blockage_p), t.evaluations, t.c_e * t.error))
        }
    }
}

/// SOP lower bound for the given scenario: closed form first, quadrature when the
/// closed form rejects the parameter family.
pub fn sop_lower_in<T: Real>(
    cfg: &SecrecyConfig<T>,
    scenario: Scenario,
    sp: &SeriesPolicy<T>,
    policy: &ContourPolicy<T>,
) -> Result<SecrecyResult<T>> {
    cfg.validate()?;
    sp.validate()?;
    let mut c = *cfg;
    c.pc.scenario = scenario;
    c.pc.validate()?;
    let (raw, route, evaluations, error_bound) = match sop_closed(&c, scenario, policy) {
        Ok((v, n, e)) => (v, Route::ClosedForm, n, e),
        Err(e) if terms::unsupported(&e) => {
            let (v, n, err) = sop_lower_quadrature(&c, sp, policy)?;
            (v, Route::Quadrature, n, err)
        }
        Err(e) => return Err(e),
    };
    let (value, clamped) = clamp_probability("sop_lower", raw)?;
    Ok(SecrecyResult { value, kind: MetricKind::SopLower, scenario, route, evaluations, error_bound, clamped })
}

/// SOP lower bound under the interference constraint only.
pub fn sop_lower_scenario1<T: Real>(cfg: &SecrecyConfig<T>, sp: &SeriesPolicy<T>) -> Result<T> {
    sop_lower_in(cfg, Scenario::Interference, sp, &ContourPolicy::default()).map(|r| r.value)
}

/// SOP lower bound under the interference and transmit constraints.
pub fn sop_lower_scenario2<T: Real>(cfg: &SecrecyConfig<T>, sp: &SeriesPolicy<T>) -> Result<T> {
    sop_lower_in(cfg, Scenario::DoubleConstraint, sp, &ContourPolicy::default()).map(|r| r.value)
}

/// Evaluates one metric for the scenario named in `cfg.pc`.
///
/// SPSC is `1 − SOP_L` at `Υ_e = 0` and EST is `Υ_e (1 − SOP_L)`, both computed
/// from the same SOP routine.
pub fn evaluate<T: Real>(
    cfg: &SecrecyConfig<T>,
    kind: MetricKind,
    sp: &SeriesPolicy<T>,
    policy: &ContourPolicy<T>,
) -> Result<SecrecyResult<T>> {
    let scenario = cfg.pc.scenario;
    match kind {
        MetricKind::SopLower => sop_lower_in(cfg, scenario, sp, policy),
        MetricKind::Spsc => {
            let r = sop_lower_in(&cfg.with_target_rate(T::zero()), scenario, sp, policy)?;
            Ok(SecrecyResult { value: T::one() - r.value, kind, ..r })
        }
        MetricKind::Est => {
            if cfg.target_rate == T::zero() {
                cfg.validate()?;
                return Ok(SecrecyResult {
                    value: T::zero(),
                    kind,
                    scenario,
                    route: Route::ClosedForm,
                    evaluations: 0,
                    error_bound: T::zero(),
                    clamped: false,
                });
            }
            let r = sop_lower_in(cfg, scenario, sp, policy)?;
            Ok(SecrecyResult { value: cfg.target_rate * (T::one() - r.value), kind, ..r })
        }
    }
}

/// SOP lower bound for the scenario in `cfg.pc`.
pub fn sop_lower<T: Real>(cfg: &SecrecyConfig<T>, sp: &SeriesPolicy<T>) -> Result<T> {
    evaluate(cfg, MetricKind::SopLower, sp, &ContourPolicy::default()).map(|r| r.value)
}

/// Probability of strictly positive secrecy capacity, `1 − SOP_L(Υ_e = 0)`.
pub fn spsc<T: Real>(cfg: &SecrecyConfig<T>, sp: &SeriesPolicy<T>) -> Result<T> {
    evaluate(cfg, MetricKind::Spsc, sp, &ContourPolicy::default()).map(|r| r.value)
}

/// Effective secrecy throughput, `Υ_e (1 − SOP_L)`.
pub fn est<T: Real>(cfg: &SecrecyConfig<T>, sp: &SeriesPolicy<T>) -> Result<T> {
    evaluate(cfg, MetricKind::Est, sp, &ContourPolicy::default()).map(|r| r.value)
}
