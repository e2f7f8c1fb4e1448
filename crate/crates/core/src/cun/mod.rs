//! End-to-end SNR distribution functions of the cognitive underlay link.
//!
//! Scenario I caps the secondary transmit power only through the interference
//! limit Ψ_Q at the primary receiver: `γ_r = Ψ_Q X_r / X_p`. Scenario II adds
//! a transmit ceiling Ψ_T: `γ_r = min(Ψ_Q / X_p, Ψ_T) X_r`. Here `X_r` and `X_p`
//! are the α-μ SNRs of the S–R and S–P links. Selection combining with the
//! blocked FSO branch multiplies the two branch distribution functions.

mod scenario1;
mod scenario2;

pub use scenario1::{
    cdf_hybrid_scenario1, cdf_hybrid_scenario1_expanded, cdf_hybrid_scenario1_with, cdf_rf_scenario1,
    cdf_rf_scenario1_general, cdf_rf_scenario1_general_with, cdf_rf_scenario1_quadrature, scenario1_terms,
};
pub use scenario2::{
    cdf_hybrid_scenario2, cdf_hybrid_scenario2_expanded, cdf_hybrid_scenario2_with, cdf_rf_scenario2,
    lambda1, lambda2, lambda2_closed, lambda2_series, Scenario2Constants,
};

use crate::channels::{db_to_linear, fso_blocked_cdf_with, RfChannelParams};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::secrecy::SecrecyConfig;
use crate::series::SeriesPolicy;
use crate::specfun::ContourPolicy;

/// Which power constraint governs the secondary transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Interference limit Ψ_Q only.
    Interference,
    /// Interference limit Ψ_Q and transmit limit Ψ_T.
    DoubleConstraint,
}

impl Scenario {
    pub fn number(self) -> u8 {
        match self {
            Scenario::Interference => 1,
            Scenario::DoubleConstraint => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Scenario::Interference),
            2 => Ok(Scenario::DoubleConstraint),
            _ => Err(Error::param("scenario", format!("must be 1 or 2, got {n}"))),
        }
    }
}

/// Ψ_Q and Ψ_T are normalized by the receiver noise power and given in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConstraints<T = f64> {
    pub psi_q_db: T,
    pub psi_t_db: Option<T>,
    pub scenario: Scenario,
}

impl<T: Real> PowerConstraints<T> {
    pub fn interference(psi_q_db: T) -> Self {
        PowerConstraints { psi_q_db, psi_t_db: None, scenario: Scenario::Interference }
    }

    pub fn double(psi_q_db: T, psi_t_db: T) -> Self {
        PowerConstraints { psi_q_db, psi_t_db: Some(psi_t_db), scenario: Scenario::DoubleConstraint }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.psi_q_db.is_finite() {
            return Err(Error::param("psi_q_db", "must be finite"));
        }
        match (self.scenario, self.psi_t_db) {
            (Scenario::DoubleConstraint, None) => Err(Error::param("psi_t_db", "scenario 2 requires Ψ_T")),
            (_, Some(t)) if !t.is_finite() => Err(Error::param("psi_t_db", "must be finite")),
            _ => Ok(()),
        }
    }

    pub fn psi_q(&self) -> T {
        db_to_linear(self.psi_q_db)
    }

    /// Linear Ψ_T; an error when the constraint is absent.
    pub fn psi_t(&self) -> Result<T> {
        self.psi_t_db
            .map(db_to_linear)
            .ok_or_else(|| Error::param("psi_t_db", "scenario 2 requires Ψ_T"))
    }
}

/// The closed forms integrate over `X_p^{α̃}`, which needs `α̃_p = α̃_r`.
pub(crate) fn require_equal_shape<T: Real>(rf_sr: &RfChannelParams<T>, rf_sp: &RfChannelParams<T>) -> Result<T> {
    let (ar, ap) = (rf_sr.a_tilde(), rf_sp.a_tilde());
    if (ar - ap).abs() > T::epsilon() * T::from_usize_exact(8) * ar.max(ap) {
        return Err(Error::Unsupported(format!(
            "closed form needs α̃_p = α̃_r (got α̃_p = {ap}, α̃_r = {ar})"
        )));
    }
    Ok(ar)
}

pub(crate) fn check_snr<T: Real>(func: &'static str, gamma: T) -> Result<()> {
    if !(gamma >= T::zero()) {
        return Err(Error::domain(func, format!("SNR {gamma} must be non-negative")));
    }
    Ok(())
}

/// Clamps roundoff excursions out of [0, 1]; larger ones are integrity errors.
pub(crate) fn probability<T: Real>(what: &str, p: T) -> Result<T> {
    let slack = T::from_f64(1e-9).unwrap();
    if !p.is_finite() || p < -slack || p > T::one() + slack {
        return Err(Error::Integrity { what: what.to_string(), value: p.to_f64_lossy() });
    }
    Ok(p.max(T::zero()).min(T::one()))
}

/// Relative accuracy of the unequal-shape Scenario I RF distribution function.
const RF_QUAD_TOL: f64 = 1e-12;

/// RF distribution function at R for the scenario in `cfg.pc`, using a
/// one-dimensional expectation in Scenario I when `α̃_p ≠ α̃_r`.
pub fn cdf_rf_with<T: Real>(
    cfg: &SecrecyConfig<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
    _policy: &ContourPolicy<T>,
) -> Result<T> {
    match cfg.pc.scenario {
        Scenario::Interference if require_equal_shape(&cfg.rf_sr, &cfg.rf_sp).is_ok() => {
            cdf_rf_scenario1(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma)
        }
        Scenario::Interference => cdf_rf_scenario1_quadrature(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma, lit(RF_QUAD_TOL)),
        Scenario::DoubleConstraint => cdf_rf_scenario2(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma, sp),
    }
}

/// Selection-combined distribution function `F_{γr} · F_{γo*}` for the scenario in `cfg.pc`.
pub fn cdf_hybrid_with<T: Real>(
    cfg: &SecrecyConfig<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    let rf = cdf_rf_with(cfg, gamma, sp, policy)?;
    if rf == T::zero() {
        cfg.fso.validate()?;
        return Ok(T::zero());
    }
    Ok(rf * fso_blocked_cdf_with(&cfg.fso, gamma, policy)?)
}
