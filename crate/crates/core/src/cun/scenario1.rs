use crate::channels::{fso_blocked_cdf_with, RfChannelParams};
use crate::cun::{check_snr, probability, require_equal_shape, PowerConstraints};
use crate::error::Result;
use crate::mellin::{power_exp_integral, Factor};
use crate::scalar::{lit, Real};
use crate::secrecy::SecrecyConfig;
use crate::series::CompensatedSum;
use crate::quad::integrate_half_line;
use crate::specfun::{ln_gamma_abs, meijer_g, regularized_gamma_pq, ContourPolicy};

/// Terms `t_m(γ)`, `m = 0..μ_r`, with `F_{γr,I}(γ) = 1 − Σ t_m`:
///
/// `t_m = Γ(μ_p+m)/(Γ(μ_p) m!) (δ_p/C)^{μ_p} (Ξγ^{α̃}/C)^m`, `Ξ = δ_r Ψ_Q^{−α̃}`,
/// `C = δ_p + Ξγ^{α̃}`. The terms are a negative-binomial mass function, so
/// they are evaluated in log space.
pub fn scenario1_terms<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
) -> Result<Vec<T>> {
    rf_sr.validate()?;
    rf_sp.validate()?;
    pc.validate()?;
    check_snr("cdf_rf_scenario1", gamma)?;
    let a = require_equal_shape(rf_sr, rf_sp)?;
    let mu_p = rf_sp.mu_t();
    let mut out = Vec::with_capacity(rf_sr.mu as usize);
    if gamma == T::zero() {
        out.push(T::one());
        out.resize(rf_sr.mu as usize, T::zero());
        return Ok(out);
    }
    let x = rf_sr.delta() * pc.psi_q().powf(-a) * gamma.powf(a);
    let ratio = x / rf_sp.delta();
    // ln(δ_p/C) and ln(x/C) without cancellation at either end.
    let ln_p = -ratio.ln_1p();
    let ln_q = -(ratio.recip()).ln_1p();
    let lg_mu = ln_gamma_abs(mu_p);
    for m in 0..rf_sr.mu {
        let mt = T::from_u32(m).unwrap();
        let ln_t = ln_gamma_abs(mu_p + mt) - lg_mu - ln_gamma_abs(mt + T::one()) + mu_p * ln_p + mt * ln_q;
        out.push(if ln_q.is_infinite() && m > 0 { T::zero() } else { ln_t.exp() });
    }
    Ok(out)
}

/// Distribution function of `γ_{r,I} = Ψ_Q X_r / X_p` for `α̃_p = α̃_r`.
pub fn cdf_rf_scenario1<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
) -> Result<T> {
    if gamma.is_infinite() && gamma > T::zero() {
        require_equal_shape(rf_sr, rf_sp)?;
        return Ok(T::one());
    }
    let terms = scenario1_terms(rf_sr, rf_sp, pc, gamma)?;
    let s: CompensatedSum<T> = terms.into_iter().collect();
    probability("cdf_rf_scenario1", T::one() - s.value())
}

/// Distribution function of `γ_{r,I}` for arbitrary `α̃_p`, `α̃_r`.
///
/// Each term `E[(wX_p^{α̃_r})^m e^{−wX_p^{α̃_r}}]/m!`, `w = δ_r(γ/Ψ_Q)^{α̃_r}`, is a
/// moment integral against the S–P density; it collapses to the equal-shape
/// closed form when `α̃_p = α̃_r` and is a univariate Fox H function otherwise.
pub fn cdf_rf_scenario1_general_with<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    rf_sr.validate()?;
    rf_sp.validate()?;
    pc.validate()?;
    check_snr("cdf_rf_scenario1_general", gamma)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    if gamma.is_infinite() {
        return Ok(T::one());
    }
    let (ar, ap) = (rf_sr.a_tilde(), rf_sp.a_tilde());
    let dp = rf_sp.delta();
    let mu_p = rf_sp.mu_t();
    let w = rf_sr.delta() * (gamma / pc.psi_q()).powf(ar);
    let ln_pref = ap.ln() + mu_p * dp.ln() - ln_gamma_abs(mu_p);
    let mut sum = CompensatedSum::new();
    for m in 0..rf_sr.mu {
        let mt = T::from_u32(m).unwrap();
        let nu = rf_sp.theta() + ar * mt + T::one();
        let i = power_exp_integral(nu, dp, ap, &[Factor::exp(w, ar)], policy)
            .map_err(|e| e.context("cdf_rf_scenario1_general"))?;
        let ln_w = if m == 0 { T::zero() } else { mt * w.ln() };
        sum.add((ln_pref + ln_w - ln_gamma_abs(mt + T::one())).exp() * i.value);
    }
    probability("cdf_rf_scenario1_general", T::one() - sum.value())
}

pub fn cdf_rf_scenario1_general<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
) -> Result<T> {
    cdf_rf_scenario1_general_with(rf_sr, rf_sp, pc, gamma, &ContourPolicy::default())
}

/// Distribution function of `γ_{r,I}` for arbitrary shapes as one expectation
/// over `u = δ_p X_p^{α̃_p} ~ Gamma(μ_p, 1)`:
/// `F = E[P(μ_r, w (u/δ_p)^{α̃_r/α̃_p})]`, `w = δ_r(γ/Ψ_Q)^{α̃_r}`.
///
/// Whichever of `F` and `1 − F` is smaller is integrated directly, so both tails
/// keep relative accuracy `tol`.
pub fn cdf_rf_scenario1_quadrature<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
    tol: T,
) -> Result<T> {
    rf_sr.validate()?;
    rf_sp.validate()?;
    pc.validate()?;
    check_snr("cdf_rf_scenario1_quadrature", gamma)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    if gamma.is_infinite() {
        return Ok(T::one());
    }
    let (ar, ap) = (rf_sr.a_tilde(), rf_sp.a_tilde());
    let (mu_r, mu_p) = (rf_sr.mu_t(), rf_sp.mu_t());
    let w = rf_sr.delta() * (gamma / pc.psi_q()).powf(ar);
    let ln_w = w.ln() - ar / ap * rf_sp.delta().ln();
    let lg = ln_gamma_abs(mu_p);
    let failure = std::cell::RefCell::new(None);
    let tail = |upper: bool| {
        let f = |u: T| -> T {
            let x = (ln_w + ar / ap * u.ln()).exp();
            match regularized_gamma_pq(mu_r, x) {
                Ok((p, q)) => {
                    let h = if upper { q } else { p };
                    h * ((mu_p - T::one()) * u.ln() - u - lg).exp()
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        };
        integrate_half_line(f, mu_p, tol)
    };
    let lower = tail(false)?.value;
    let value = if lower <= lit(0.5) { lower } else { T::one() - tail(true)?.value };
    if let Some(e) = failure.into_inner() {
        return Err(e.context("cdf_rf_scenario1_quadrature"));
    }
    probability("cdf_rf_scenario1_quadrature", value)
}

pub fn cdf_hybrid_scenario1_with<T: Real>(cfg: &SecrecyConfig<T>, gamma: T, policy: &ContourPolicy<T>) -> Result<T> {
    let rf = cdf_rf_scenario1(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma)?;
    if rf == T::zero() {
        cfg.fso.validate()?;
        return Ok(T::zero());
    }
    Ok(rf * fso_blocked_cdf_with(&cfg.fso, gamma, policy)?)
}

/// Selection combining: `F_{γf,I} = F_{γr,I} · (P_o + (1 − P_o) F_{γo})`.
pub fn cdf_hybrid_scenario1<T: Real>(cfg: &SecrecyConfig<T>, gamma: T) -> Result<T> {
    cdf_hybrid_scenario1_with(cfg, gamma, &ContourPolicy::default())
}

/// The same distribution function expanded term by term:
/// `P_o + (1−P_o)KΣς G − P_o Σ t_m − (1−P_o)K ΣΣ ς t_m G`.
pub fn cdf_hybrid_scenario1_expanded<T: Real>(
    cfg: &SecrecyConfig<T>,
    gamma: T,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    let terms = scenario1_terms(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma)?;
    let po = cfg.fso.blockage_p;
    let mut acc = CompensatedSum::new();
    acc.add(po);
    for &t in &terms {
        acc.add(-po * t);
    }
    if gamma > T::zero() && po < T::one() {
        let c = cfg.fso.constants()?;
        let z = c.v * gamma / c.mu_s;
        for (i, &vs) in c.varsigma.iter().enumerate() {
            let g = meijer_g(&c.cdf_kernel(&cfg.fso, i as u32 + 1, z)?, policy)?;
            let base = (T::one() - po) * c.k * vs * g;
            acc.add(base);
            for &t in &terms {
                acc.add(-base * t);
            }
        }
    }
    probability("cdf_hybrid_scenario1_expanded", acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{alpha_mu_cdf, alpha_mu_pdf};
    use crate::quad::integrate_half_line;

    fn rf(alpha: f64, mu: u32, db: f64) -> RfChannelParams {
        RfChannelParams::new(alpha, mu, db).unwrap()
    }

    fn oracle(r: &RfChannelParams, p: &RfChannelParams, psi_q: f64, gamma: f64) -> f64 {
        integrate_half_line(
            |x: f64| alpha_mu_cdf(r, gamma * x / psi_q).unwrap() * alpha_mu_pdf(p, x).unwrap(),
            p.phi(),
            1e-13,
        )
        .unwrap()
        .value
    }

    #[test]
    fn limits_and_shape_check() {
        let (r, p) = (rf(2.0, 2, 15.0), rf(2.0, 2, 10.0));
        let pc = PowerConstraints::interference(0.0);
        assert_eq!(cdf_rf_scenario1(&r, &p, &pc, 0.0).unwrap(), 0.0);
        let big = 1e6 * pc.psi_q() * r.phi();
        assert!((cdf_rf_scenario1(&r, &p, &pc, big).unwrap() - 1.0).abs() < 1e-9);
        let err = cdf_rf_scenario1(&r, &rf(5.0, 2, 10.0), &pc, 1.0).unwrap_err();
        assert!(matches!(err, crate::Error::Unsupported(_)));
    }

    #[test]
    fn reference_point() {
        // mpmath quadrature of the defining integral
        let (r, p) = (rf(2.0, 2, 15.0), rf(2.0, 2, 10.0));
        let pc = PowerConstraints::interference(0.0);
        let v = cdf_rf_scenario1(&r, &p, &pc, 1.0).unwrap();
        let q = oracle(&r, &p, 1.0, 1.0);
        assert!((v - q).abs() < 1e-10, "{v} vs {q}");
        assert!((v - REF_S1).abs() < 1e-12, "{v}");
    }

    const REF_S1: f64 = 0.14542906335600776;

    #[test]
    fn quadrature_route_keeps_relative_accuracy_in_the_lower_tail() {
        // mpmath, 40 digits: α_r = 2, α_p = 5, μ = 6, Φ_r = Φ_p = Ψ_Q = 15 dB
        let (r, p) = (rf(2.0, 6, 15.0), rf(5.0, 6, 15.0));
        let pc = PowerConstraints::interference(15.0);
        let refs = [
            (0.1, 1.311889430708380203e-16),
            (1.0, 1.240124625069800402e-10),
            (10.0, 7.116330044198543188e-5),
            (100.0, 0.5926687810280819099),
        ];
        for (g, want) in refs {
            let v = cdf_rf_scenario1_quadrature(&r, &p, &pc, g, 1e-12).unwrap();
            assert!(((v - want) / want).abs() < 1e-10, "γ={g}: {v} vs {want}");
        }
    }

    #[test]
    fn general_route_matches_quadrature() {
        let pc = PowerConstraints::interference(15.0);
        for (r, p) in [(rf(2.0, 6, 15.0), rf(5.0, 6, 15.0)), (rf(3.0, 2, 5.0), rf(2.0, 3, 0.0))] {
            for g in [0.3, 3.0, 40.0, 400.0] {
                let v = cdf_rf_scenario1_general(&r, &p, &pc, g).unwrap();
                let q = oracle(&r, &p, pc.psi_q(), g);
                assert!((v - q).abs() < 1e-8, "γ={g}: {v} vs {q}");
                let u = cdf_rf_scenario1_quadrature(&r, &p, &pc, g, 1e-12).unwrap();
                assert!((u - v).abs() < 1e-9, "γ={g}: {u} vs {v}");
            }
        }
        let (r, p) = (rf(2.0, 2, 15.0), rf(2.0, 3, 10.0));
        let pc = PowerConstraints::interference(3.0);
        for g in [1e-3, 0.1, 1.0, 10.0, 1e4] {
            let a = cdf_rf_scenario1_quadrature(&r, &p, &pc, g, 1e-12).unwrap();
            let b = cdf_rf_scenario1(&r, &p, &pc, g).unwrap();
            assert!((a - b).abs() <= 1e-10 * b.min(1.0 - b).max(1e-300) + 1e-15, "γ={g}: {a} vs {b}");
        }
        for g in [0.1, 1.0, 10.0] {
            let a = cdf_rf_scenario1_general(&r, &p, &pc, g).unwrap();
            let b = cdf_rf_scenario1(&r, &p, &pc, g).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
