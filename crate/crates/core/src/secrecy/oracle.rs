//! Direct adaptive quadrature of the defining integrals of `ℑ₁…ℑ₄` and
//! `ℛ₁…ℛ₈`. Slow, but independent of the Mellin–Barnes machinery, so the
//! closed forms are tested against it.

use std::cell::RefCell;

use crate::channels::malaga_cdf_with;
use crate::cun::{scenario1_terms, Scenario2Constants};
use crate::error::Result;
use crate::quad::integrate_half_line;
use crate::scalar::{lit, Real};
use crate::secrecy::SecrecyConfig;
use crate::series::CompensatedSum;
use crate::specfun::{gamma_q, ContourPolicy};

/// `∫₀^∞ γ^{Θ_e} e^{−δ_e γ^{α̃_e}} h(σγ) dγ`; the first error raised by `h` is returned.
fn weighted<T: Real>(cfg: &SecrecyConfig<T>, tol: T, h: impl Fn(T) -> Result<T>) -> Result<T> {
    let e = &cfg.rf_se;
    let (theta, delta, a_e, sigma) = (e.theta(), e.delta(), e.a_tilde(), cfg.sigma());
    let failure = RefCell::new(None);
    let f = |g: T| -> T {
        if failure.borrow().is_some() || g == T::zero() {
            return T::zero();
        }
        match h(sigma * g) {
            Ok(v) => v * (theta * g.ln() - delta * g.powf(a_e)).exp(),
            Err(err) => {
                *failure.borrow_mut() = Some(err);
                T::zero()
            }
        }
    };
    let q = integrate_half_line(f, e.phi(), tol)?;
    match failure.into_inner() {
        Some(err) => Err(err.context("term quadrature")),
        None => Ok(q.value),
    }
}

fn nb_sum<T: Real>(cfg: &SecrecyConfig<T>, x: T) -> Result<T> {
    let s: CompensatedSum<T> = scenario1_terms(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, x)?.into_iter().collect();
    Ok(s.value())
}

/// `[ℑ₁, ℑ₂, ℑ₃, ℑ₄]` by quadrature with relative tolerance `tol`.
pub fn im_terms_quadrature<T: Real>(cfg: &SecrecyConfig<T>, policy: &ContourPolicy<T>, tol: T) -> Result<[T; 4]> {
    cfg.validate()?;
    let fo = |x: T| malaga_cdf_with(&cfg.fso, x, policy);
    Ok([
        weighted(cfg, tol, |_| Ok(T::one()))?,
        weighted(cfg, tol, fo)?,
        weighted(cfg, tol, |x| nb_sum(cfg, x))?,
        weighted(cfg, tol, |x| Ok(nb_sum(cfg, x)? * fo(x)?))?,
    ])
}

/// `[ℛ₁, …, ℛ₈]` by quadrature with relative tolerance `tol`.
///
/// `S_r(x) = Q(μ_r, B x^{α̃})` and `𝒫₂(x) = Σ_m t_m(x) Q(μ_p + m, A + B x^{α̃})`.
pub fn r_terms_quadrature<T: Real>(cfg: &SecrecyConfig<T>, policy: &ContourPolicy<T>, tol: T) -> Result<[T; 8]> {
    cfg.validate()?;
    let k = Scenario2Constants::new(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc)?;
    let mu_r = cfg.rf_sr.mu_t();
    let mu_p = cfg.rf_sp.mu_t();
    let lam = |x: T| k.b * x.powf(k.a_r);
    let fo = |x: T| malaga_cdf_with(&cfg.fso, x, policy);
    let s_r = |x: T| gamma_q(mu_r, lam(x));
    let p2 = |x: T| -> Result<T> {
        let t = scenario1_terms(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, x)?;
        let mut s = CompensatedSum::new();
        for (m, tm) in t.into_iter().enumerate() {
            s.add(tm * gamma_q(mu_p + lit::<T>(m as f64), k.a + lam(x))?);
        }
        Ok(s.value())
    };
    let r1 = weighted(cfg, tol, |_| Ok(T::one()))?;
    let r2 = weighted(cfg, tol, s_r)?;
    let r4 = weighted(cfg, tol, p2)?;
    let r5 = weighted(cfg, tol, fo)?;
    let r6 = weighted(cfg, tol, |x| Ok(s_r(x)? * fo(x)?))?;
    let r8 = weighted(cfg, tol, |x| Ok(p2(x)? * fo(x)?))?;
    Ok([r1, r2, r2, r4, r5, r6, r6, r8])
}
