//! Integral terms of the SOP lower bound.
//!
//! Every term has the form `∫₀^∞ γ^{Θ_e} e^{−δ_e γ^{α̃_e}} h(σγ) dγ`, with `h` a
//! product of the branch distribution-function pieces. Each piece is a Fox H
//! kernel in `γ`, so each term is a moment integral evaluated in closed form by
//! [`power_exp_integral`]. The binomial factors `(1 + wγ^{α̃})^{−Ω}` are kept
//! whole as H kernels instead of being expanded into power series.

use crate::cun::{require_equal_shape, Scenario2Constants};
use crate::error::{Error, Result};
use crate::mellin::{exp_pair_moment_meijer, power_exp_integral, Factor, MomentValue};
use crate::scalar::Real;
use crate::secrecy::SecrecyConfig;
use crate::series::CompensatedSum;
use crate::specfun::{gamma_q, ln_gamma_abs, ContourPolicy};

/// `ℑ₁ … ℑ₄`, each the full weighted sum over its inner indices:
///
/// - `ℑ₁`: `h = 1`
/// - `ℑ₂`: `h = F_o`, the unblocked Málaga distribution function
/// - `ℑ₃`: `h = Σ_m t_m`, the negative-binomial terms of `1 − F_{γr,I}`
/// - `ℑ₄`: `h = Σ_m t_m F_o`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImTerms<T = f64> {
    pub i1: T,
    pub i2: T,
    pub i3: T,
    pub i4: T,
    /// Normalization `c_e = α̃_e δ_e^{μ_e}/Γ(μ_e)` of the eavesdropper density.
    pub c_e: T,
    /// Number of closed-form special-function evaluations.
    pub evaluations: usize,
    /// Accumulated absolute error estimate.
    pub error: T,
}

/// `ℛ₁ … ℛ₈` (index 0 holds `ℛ₁`) with the Scenario II constants they combine with:
///
/// - `ℛ₁`: `h = 1`
/// - `ℛ₂ = ℛ₃`: `h = S_r`, the Poisson head of `Pr{X_r > γ/Ψ_T}`
/// - `ℛ₄`: `h = 𝒫₂`
/// - `ℛ₅`: `h = F_o`
/// - `ℛ₆ = ℛ₇`: `h = S_r F_o`
/// - `ℛ₈`: `h = 𝒫₂ F_o`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RTerms<T = f64> {
    pub r: [T; 8],
    /// `ΣΞ₁ = e^{−A} Σ_{m<μ_p} A^m/m!`.
    pub xi1_sum: T,
    /// `𝒳 = 1 + Ξ₅ − ΣΞ₁`.
    pub curly_x: T,
    pub c_e: T,
    pub evaluations: usize,
    pub error: T,
}

struct Ctx<'a, T: Real> {
    cfg: &'a SecrecyConfig<T>,
    policy: &'a ContourPolicy<T>,
    /// `ν₀ = α̃_e μ_e`, so that `γ^{Θ_e} = γ^{ν₀−1}`.
    nu0: T,
    delta_e: T,
    a_e: T,
    evaluations: usize,
    error: T,
}

impl<'a, T: Real> Ctx<'a, T> {
    fn new(cfg: &'a SecrecyConfig<T>, policy: &'a ContourPolicy<T>) -> Result<Self> {
        cfg.validate()?;
        policy.validate()?;
        let e = &cfg.rf_se;
        Ok(Ctx {
            cfg,
            policy,
            nu0: e.a_tilde() * e.mu_t(),
            delta_e: e.delta(),
            a_e: e.a_tilde(),
            evaluations: 0,
            error: T::zero(),
        })
    }

    fn c_e(&self) -> T {
        let e = &self.cfg.rf_se;
        (self.a_e.ln() + e.mu_t() * self.delta_e.ln() - ln_gamma_abs(e.mu_t())).exp()
    }

    /// `∫ γ^{ν₀ + extra − 1} e^{−δ_e γ^{α̃_e}} Π factors dγ`.
    fn moment(&mut self, extra: T, factors: &[Factor<T>], tag: &str) -> Result<T> {
        let MomentValue { value, error, .. } =
            power_exp_integral(self.nu0 + extra, self.delta_e, self.a_e, factors, self.policy)
                .map_err(|e| e.context(tag))?;
        self.evaluations += 1;
        self.error = self.error + error;
        Ok(value)
    }

    /// `F_o(σγ) = Σ_{m_o} K ς_{m_o} G(Vσγ/μ_s)` as weighted H kernels in `γ`.
    fn fso_factors(&self) -> Result<Vec<Factor<T>>> {
        let fso = &self.cfg.fso;
        let c = fso.constants()?;
        let w = c.v * self.cfg.sigma() / c.mu_s;
        let mut out = Vec::with_capacity(c.varsigma.len());
        for (i, &vs) in c.varsigma.iter().enumerate() {
            let kernel = c.cdf_kernel(fso, i as u32 + 1, T::one())?.to_fox()?.kernel;
            out.push(Factor::fox(kernel, c.k * vs, w, T::one()));
        }
        Ok(out)
    }
}

/// `t_m(σγ) = coef_m γ^{α̃m} (1 + wγ^{α̃})^{−Ω_m}` for `m < μ_r`.
struct NbTerm<T> {
    m: u32,
    ln_coef: T,
    binomial: Factor<T>,
}

/// Negative-binomial terms with `κ = δ_r Ψ_Q^{−α̃}/δ_p` and `w = κσ^{α̃}`.
fn nb_terms<T: Real>(cfg: &SecrecyConfig<T>, a: T) -> Result<(Vec<NbTerm<T>>, T)> {
    let kappa = cfg.rf_sr.delta() * cfg.pc.psi_q().powf(-a) / cfg.rf_sp.delta();
    let w = kappa * cfg.sigma().powf(a);
    let mu_p = cfg.rf_sp.mu_t();
    let mut out = Vec::with_capacity(cfg.rf_sr.mu as usize);
    for m in 0..cfg.rf_sr.mu {
        let mt = T::from_u32(m).unwrap();
        let omega = mu_p + mt;
        let ln_coef = ln_gamma_abs(omega) - ln_gamma_abs(mu_p) - ln_gamma_abs(mt + T::one()) + mt * w.ln();
        out.push(NbTerm { m, ln_coef, binomial: Factor::binomial(omega, w, a)? });
    }
    Ok((out, w))
}

pub fn im_terms_with<T: Real>(cfg: &SecrecyConfig<T>, policy: &ContourPolicy<T>) -> Result<ImTerms<T>> {
    let mut cx = Ctx::new(cfg, policy)?;
    let a = require_equal_shape(&cfg.rf_sr, &cfg.rf_sp)?;
    let i1 = (ln_gamma_abs(cfg.rf_se.mu_t()) - cx.a_e.ln() - cfg.rf_se.mu_t() * cx.delta_e.ln()).exp();
    let fso = cx.fso_factors()?;
    let (nb, _) = nb_terms(cfg, a)?;
    let mut i2 = CompensatedSum::new();
    for f in &fso {
        i2.add(cx.moment(T::zero(), std::slice::from_ref(f), "I2")?);
    }
    let mut i3 = CompensatedSum::new();
    let mut i4 = CompensatedSum::new();
    for t in &nb {
        let extra = a * T::from_u32(t.m).unwrap();
        let coef = t.ln_coef.exp();
        i3.add(coef * cx.moment(extra, std::slice::from_ref(&t.binomial), "I3")?);
        for f in &fso {
            i4.add(coef * cx.moment(extra, &[t.binomial.clone(), f.clone()], "I4")?);
        }
    }
    Ok(ImTerms {
        i1,
        i2: i2.value(),
        i3: i3.value(),
        i4: i4.value(),
        c_e: cx.c_e(),
        evaluations: cx.evaluations,
        error: cx.error,
    })
}

/// The four Scenario I integral terms.
pub fn im_terms<T: Real>(cfg: &SecrecyConfig<T>) -> Result<ImTerms<T>> {
    im_terms_with(cfg, &ContourPolicy::default())
}

/// `∫ γ^{ν−1} e^{−δ_e γ^{α̃_e}} e^{−λγ^{α̃}} dγ`: merged exponentials when the powers
/// agree, the Meijer G form for integer powers, the Fox H form otherwise.
fn exp_moment<T: Real>(cx: &mut Ctx<'_, T>, extra: T, lambda: T, a: T) -> Result<T> {
    let (ae, nu) = (cx.a_e, cx.nu0 + extra);
    let integer = |x: T| x.fract() == T::zero() && x >= T::one() && x <= T::from_u32(64).unwrap();
    if a != ae && integer(ae) && integer(a) {
        let v = exp_pair_moment_meijer(nu, cx.delta_e, ae.to_u32().unwrap(), lambda, a.to_u32().unwrap(), cx.policy)
            .map_err(|e| e.context("R2"))?;
        cx.evaluations += 1;
        return Ok(v);
    }
    cx.moment(extra, &[Factor::exp(lambda, a)], "R2")
}

pub fn r_terms_with<T: Real>(cfg: &SecrecyConfig<T>, policy: &ContourPolicy<T>) -> Result<RTerms<T>> {
    let mut cx = Ctx::new(cfg, policy)?;
    let a = require_equal_shape(&cfg.rf_sr, &cfg.rf_sp)?;
    let k = Scenario2Constants::new(&cfg.rf_sr, &cfg.rf_sp, &cfg.pc)?;
    let sigma_a = cfg.sigma().powf(a);
    let lambda = k.b * sigma_a;
    let r1 = (ln_gamma_abs(cfg.rf_se.mu_t()) - cx.a_e.ln() - cfg.rf_se.mu_t() * cx.delta_e.ln()).exp();
    let fso = cx.fso_factors()?;
    let (nb, _) = nb_terms(cfg, a)?;
    let exp_r = Factor::exp(lambda, a);

    // S_r(σγ) = Σ_{m<μ_r} λ^m γ^{α̃m}/m! e^{−λγ^{α̃}}
    let mut r2 = CompensatedSum::new();
    let mut r6 = CompensatedSum::new();
    for m in 0..cfg.rf_sr.mu {
        let mt = T::from_u32(m).unwrap();
        let coef = (mt * lambda.ln() - ln_gamma_abs(mt + T::one())).exp();
        let extra = a * mt;
        r2.add(coef * exp_moment(&mut cx, extra, lambda, a)?);
        for f in &fso {
            r6.add(coef * cx.moment(extra, &[exp_r.clone(), f.clone()], "R6")?);
        }
    }
    let mut r5 = CompensatedSum::new();
    for f in &fso {
        r5.add(cx.moment(T::zero(), std::slice::from_ref(f), "R5")?);
    }

    // 𝒫₂(σγ) = Σ_{m_r} Σ_{m₄<Ω} t_{m_r} λ^{m₄} Q(Ω−m₄, A)/m₄! γ^{α̃m₄} e^{−λγ^{α̃}}
    let mut r4 = CompensatedSum::new();
    let mut r8 = CompensatedSum::new();
    for t in &nb {
        let omega = k.mu_p + t.m;
        for m4 in 0..omega {
            let m4t = T::from_u32(m4).unwrap();
            let q = gamma_q(T::from_u32(omega - m4).unwrap(), k.a)?;
            if q == T::zero() {
                continue;
            }
            let coef = (t.ln_coef + m4t * lambda.ln() - ln_gamma_abs(m4t + T::one())).exp() * q;
            let extra = a * T::from_u32(t.m + m4).unwrap();
            r4.add(coef * cx.moment(extra, &[exp_r.clone(), t.binomial.clone()], "R4")?);
            for f in &fso {
                r8.add(coef * cx.moment(extra, &[exp_r.clone(), t.binomial.clone(), f.clone()], "R8")?);
            }
        }
    }

    let xi1_sum = {
        let mut term = T::one();
        let mut s = CompensatedSum::new();
        for m in 0..k.mu_p {
            if m > 0 {
                term = term * k.a / T::from_u32(m).unwrap();
            }
            s.add(term);
        }
        (-k.a).exp() * s.value()
    };
    let (r2, r6) = (r2.value(), r6.value());
    Ok(RTerms {
        r: [r1, r2, r2, r4.value(), r5.value(), r6, r6, r8.value()],
        xi1_sum,
        curly_x: T::one() + k.xi5 - xi1_sum,
        c_e: cx.c_e(),
        evaluations: cx.evaluations,
        error: cx.error,
    })
}

/// The eight Scenario II integral terms.
pub fn r_terms<T: Real>(cfg: &SecrecyConfig<T>) -> Result<RTerms<T>> {
    r_terms_with(cfg, &ContourPolicy::default())
}

impl<T: Real> ImTerms<T> {
    /// `c_e [P_o ℑ₁ + (1−P_o) ℑ₂ − P_o ℑ₃ − (1−P_o) ℑ₄]`, before clamping.
    pub fn sop(&self, blockage_p: T) -> T {
        let q = T::one() - blockage_p;
        let mut s = CompensatedSum::new();
        for x in [blockage_p * self.i1, q * self.i2, -blockage_p * self.i3, -q * self.i4] {
            s.add(x);
        }
        self.c_e * s.value()
    }
}

impl<T: Real> RTerms<T> {
    /// `c_e {P_o[𝒳ℛ₁ − ℛ₂ + ΣΞ₁ℛ₃ − ℛ₄] + (1−P_o)[𝒳ℛ₅ − ℛ₆ + ΣΞ₁ℛ₇ − ℛ₈]}`, before clamping.
    pub fn sop(&self, blockage_p: T) -> T {
        let (p, q) = (blockage_p, T::one() - blockage_p);
        let r = &self.r;
        let mut s = CompensatedSum::new();
        for x in [
            p * self.curly_x * r[0],
            -p * r[1],
            p * self.xi1_sum * r[2],
            -p * r[3],
            q * self.curly_x * r[4],
            -q * r[5],
            q * self.xi1_sum * r[6],
            -q * r[7],
        ] {
            s.add(x);
        }
        self.c_e * s.value()
    }
}

pub(crate) fn unsupported(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_))
}
