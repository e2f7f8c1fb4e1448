use crate::channels::{fso_blocked_cdf_with, RfChannelParams};
use crate::cun::{check_snr, probability, require_equal_shape, PowerConstraints};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::secrecy::SecrecyConfig;
use crate::series::{CompensatedSum, SeriesPolicy, SeriesValue};
use crate::specfun::{gamma_q, ln_gamma_abs, meijer_g, ContourPolicy};

/// Constants of the double-constraint distribution function.
///
/// `y₀ = Ψ_Q/Ψ_T` is the S–P SNR above which the interference limit binds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario2Constants<T = f64> {
    /// `A = δ_p y₀^{α̃_p}`.
    pub a: T,
    /// `B = δ_r Ψ_T^{−α̃_r}`.
    pub b: T,
    /// `D = δ_r Ψ_Q^{−α̃_r}`.
    pub d: T,
    /// `Ξ₅ = Q(μ_p, A) = Pr{X_p > y₀}`.
    pub xi5: T,
    pub delta_p: T,
    pub mu_p: u32,
    pub mu_r: u32,
    pub a_r: T,
}

impl<T: Real> Scenario2Constants<T> {
    pub fn new(rf_sr: &RfChannelParams<T>, rf_sp: &RfChannelParams<T>, pc: &PowerConstraints<T>) -> Result<Self> {
        rf_sr.validate()?;
        rf_sp.validate()?;
        pc.validate()?;
        let (psi_q, psi_t) = (pc.psi_q(), pc.psi_t()?);
        let (ar, ap) = (rf_sr.a_tilde(), rf_sp.a_tilde());
        let a = rf_sp.delta() * (psi_q / psi_t).powf(ap);
        Ok(Scenario2Constants {
            a,
            b: rf_sr.delta() * psi_t.powf(-ar),
            d: rf_sr.delta() * psi_q.powf(-ar),
            xi5: gamma_q(rf_sp.mu_t(), a)?,
            delta_p: rf_sp.delta(),
            mu_p: rf_sp.mu,
            mu_r: rf_sr.mu,
            a_r: ar,
        })
    }

    /// `e^{−x} Σ_{m<n} x^m/m!`.
    fn poisson_head(n: u32, x: T) -> T {
        let mut term = T::one();
        let mut sum = CompensatedSum::new();
        for m in 0..n {
            if m > 0 {
                term = term * x / T::from_u32(m).unwrap();
            }
            sum.add(term);
        }
        (-x).exp() * sum.value()
    }
}

/// `Λ₁ = Pr{X_p ≤ y₀} Pr{X_r ≤ γ/Ψ_T}` from the finite Poisson sums:
/// `1 − ΣΞ₁ − ΣΞ₂ + ΣΣΞ₃`.
pub fn lambda1<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
) -> Result<T> {
    check_snr("lambda1", gamma)?;
    let c = Scenario2Constants::new(rf_sr, rf_sp, pc)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    let xi1 = Scenario2Constants::poisson_head(c.mu_p, c.a);
    let xi2 = Scenario2Constants::poisson_head(c.mu_r, c.b * gamma.powf(c.a_r));
    let mut acc = CompensatedSum::new();
    for t in [T::one(), -xi1, -xi2, xi1 * xi2] {
        acc.add(t);
    }
    probability("lambda1", acc.value())
}

/// `Λ₂ = Pr{X_p > y₀, Ψ_Q X_r / X_p ≤ γ} = Ξ₅ − 𝒫₂` with every inner sum finite:
///
/// `𝒫₂ = Σ_{m<μ_r} Γ(Ω)/(Γ(μ_p) m!) (δ_p/C)^{μ_p} (Dγ^{α̃}/C)^m Q(Ω, A + Bγ^{α̃})`,
/// `Ω = μ_p + m`, `C = δ_p + Dγ^{α̃}`.
pub fn lambda2_closed<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
) -> Result<T> {
    check_snr("lambda2", gamma)?;
    let a = require_equal_shape(rf_sr, rf_sp)?;
    let c = Scenario2Constants::new(rf_sr, rf_sp, pc)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    let ga = gamma.powf(a);
    let ratio = c.d * ga / c.delta_p;
    let (ln_p, ln_q) = (-ratio.ln_1p(), -ratio.recip().ln_1p());
    let mu_p = T::from_u32(c.mu_p).unwrap();
    let mut p2 = CompensatedSum::new();
    for m in 0..c.mu_r {
        let mt = T::from_u32(m).unwrap();
        let omega = mu_p + mt;
        let ln_t = ln_gamma_abs(omega) - ln_gamma_abs(mu_p) - ln_gamma_abs(mt + T::one()) + mu_p * ln_p + mt * ln_q;
        p2.add(ln_t.exp() * gamma_q(omega, c.a + c.b * ga)?);
    }
    probability("lambda2", c.xi5 - p2.value())
}

/// `Λ₂` as the quadruple series `Ξ₅ − Σ_{m_r} Σ_{m₃<Ω} Σ_{m₄≤m₃} Σ_{m₅}`, the last
/// sum being the alternating binomial expansion of `(1 + κγ^{α̃})^{−Ω}`,
/// `κ = D/δ_p`. It converges only for `κγ^{α̃} < 1`.
pub fn lambda2_series<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
) -> Result<SeriesValue<T>> {
    check_snr("lambda2_series", gamma)?;
    sp.validate()?;
    let a = require_equal_shape(rf_sr, rf_sp)?;
    let c = Scenario2Constants::new(rf_sr, rf_sp, pc)?;
    if gamma == T::zero() {
        return Ok(SeriesValue { value: T::zero(), terms: 1, bound: T::zero() });
    }
    let ga = gamma.powf(a);
    let x = c.d * ga / c.delta_p;
    let bg = c.b * ga;
    let mu_p = T::from_u32(c.mu_p).unwrap();
    let mut p2 = CompensatedSum::new();
    let (mut terms, mut bound) = (0, T::zero());
    for m_r in 0..c.mu_r {
        let mt = T::from_u32(m_r).unwrap();
        let omega = c.mu_p + m_r;
        let om = T::from_u32(omega).unwrap();
        // Σ_{m₃<Ω} Σ_{m₄≤m₃} C(m₃,m₄) A^{m₃−m₄} (Bγ^{α̃})^{m₄} / m₃!, all terms positive.
        let mut inner = CompensatedSum::new();
        for m3 in 0..omega {
            let mut binom = T::one();
            for m4 in 0..=m3 {
                if m4 > 0 {
                    binom = binom * T::from_u32(m3 - m4 + 1).unwrap() / T::from_u32(m4).unwrap();
                }
                let ln = c.a.ln() * T::from_u32(m3 - m4).unwrap() + bg.ln() * T::from_u32(m4).unwrap()
                    - ln_gamma_abs(T::from_u32(m3 + 1).unwrap());
                inner.add(binom * ln.exp());
            }
        }
        let ln_lead = mu_p * c.delta_p.ln() + ln_gamma_abs(om) - ln_gamma_abs(mu_p) - ln_gamma_abs(mt + T::one())
            + mt * (c.d * ga).ln()
            - om * c.delta_p.ln()
            - (c.a + bg);
        let lead = ln_lead.exp() * inner.value();
        // Σ_{m₅} C(Ω+m₅−1, m₅) (−x)^{m₅}
        let tail = sp
            .sum("lambda2 m5", |n| {
                let nt = T::from_usize_exact(n);
                let ln_c = ln_gamma_abs(om + nt) - ln_gamma_abs(om) - ln_gamma_abs(nt + T::one());
                let mag = if n == 0 { T::one() } else { (ln_c + nt * x.ln()).exp() };
                if n % 2 == 0 {
                    mag
                } else {
                    -mag
                }
            })
            .map_err(|e| e.context("lambda2_series"))?;
        terms += tail.terms;
        bound = bound.max((lead * tail.bound).abs());
        p2.add(lead * tail.value);
    }
    Ok(SeriesValue { value: probability("lambda2_series", c.xi5 - p2.value())?, terms, bound })
}

/// `Λ₂` under `sp`: the quadruple series where it converges within the term
/// budget, the resummed finite form elsewhere.
pub fn lambda2<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
) -> Result<T> {
    match lambda2_series(rf_sr, rf_sp, pc, gamma, sp) {
        Ok(v) => Ok(v.value),
        Err(Error::Series { .. }) => lambda2_closed(rf_sr, rf_sp, pc, gamma),
        Err(e) => Err(e),
    }
}

/// Distribution function of `γ_{r,II} = min(Ψ_Q/X_p, Ψ_T) X_r`: `Λ₁ + Λ₂`.
pub fn cdf_rf_scenario2<T: Real>(
    rf_sr: &RfChannelParams<T>,
    rf_sp: &RfChannelParams<T>,
    pc: &PowerConstraints<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
) -> Result<T> {
    let l1 = lambda1(rf_sr, rf_sp, pc, gamma)?;
    let l2 = lambda2(rf_sr, rf_sp, pc, gamma, sp)?;
    probability("cdf_rf_scenario2", l1 + l2)
}

pub fn cdf_hybrid_scenario2_with<T: Real>(
    cfg: &SecrecyConfig<T>,
    gamma: T,
    sp: &SeriesPolicy<T>,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    let rf = cdf_rf_scenario2(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma, sp)?;
    if rf == T::zero() {
        cfg.fso.validate()?;
        return Ok(T::zero());
    }
    Ok(rf * fso_blocked_cdf_with(&cfg.fso, gamma, policy)?)
}

/// Selection combining: `F_{γf,II} = F_{γr,II} · (P_o + (1 − P_o) F_{γo})`.
pub fn cdf_hybrid_scenario2<T: Real>(cfg: &SecrecyConfig<T>, gamma: T, sp: &SeriesPolicy<T>) -> Result<T> {
    cdf_hybrid_scenario2_with(cfg, gamma, sp, &ContourPolicy::default())
}

/// The expanded form `(𝒳 − ΣΞ₂ + ΣΣΞ₃ − 𝒫₂)(P_o + (1−P_o)KΣςG)` with
/// `𝒳 = 1 + Ξ₅ − ΣΞ₁`. `Ξ₅` is an incomplete gamma function and `ΣΞ₁` its
/// finite Poisson sum, so `𝒳` is 1 up to roundoff through two independent paths.
pub fn cdf_hybrid_scenario2_expanded<T: Real>(
    cfg: &SecrecyConfig<T>,
    gamma: T,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    check_snr("cdf_hybrid_scenario2_expanded", gamma)?;
    let a = require_equal_shape(&cfg.rf_sr, &cfg.rf_sp)?;
    let c = Scenario2Constants::new(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    let xi1 = Scenario2Constants::poisson_head(c.mu_p, c.a);
    let xi2 = Scenario2Constants::poisson_head(c.mu_r, c.b * gamma.powf(a));
    let p2 = c.xi5 - lambda2_closed(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc, gamma)?;
    let curly_x = T::one() + c.xi5 - xi1;
    let mut rf = CompensatedSum::new();
    for t in [curly_x, -xi2, xi1 * xi2, -p2] {
        rf.add(t);
    }
    let po = cfg.fso.blockage_p;
    let mut fso = CompensatedSum::new();
    fso.add(po);
    if po < T::one() {
        let k = cfg.fso.constants()?;
        let z = k.v * gamma / k.mu_s;
        for (i, &vs) in k.varsigma.iter().enumerate() {
            fso.add((T::one() - po) * k.k * vs * meijer_g(&k.cdf_kernel(&cfg.fso, i as u32 + 1, z)?, policy)?);
        }
    }
    probability("cdf_hybrid_scenario2_expanded", rf.value() * fso.value())
}
