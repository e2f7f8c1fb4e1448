//! Closed forms for `∫₀^∞ γ^{ν−1} e^{−δγ^b} Π_k K_k(w_k γ^{c_k}) dγ`.
//!
//! Each kernel is a Fox H function, so inserting its Mellin–Barnes integral and
//! integrating over γ leaves a joint factor `Γ(ν/b − Σ c_k s_k / b)`:
//!
//! ```text
//! I = 1/(b δ^{ν/b}) · H[ w_k δ^{−c_k/b} ]   (one contour per kernel)
//! ```
//!
//! Zero kernels give `Γ(ν/b)/(b δ^{ν/b})`, one kernel a univariate Fox H, two
//! kernels the bivariate function. Exponential kernels whose power matches `b`
//! are merged into `δ` first.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{
    fox_h_bivariate_eval, fox_h_eval, gamma_fn, ln_gamma_abs, meijer_g, BivariateFoxHSpec, ContourPolicy,
    FoxHKernel, FoxHSpec, JointFactor, MeijerGSpec,
};

/// `scale · H-kernel(w γ^c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<T = f64> {
    pub kernel: FoxHKernel<T>,
    pub scale: T,
    pub w: T,
    pub c: T,
    exp_kernel: bool,
}

impl<T: Real> Factor<T> {
    /// `e^{−w γ^c}`.
    pub fn exp(w: T, c: T) -> Self {
        Factor { kernel: FoxHKernel::exponential(), scale: T::one(), w, c, exp_kernel: true }
    }

    /// `(1 + w γ^c)^{−ω}`.
    pub fn binomial(omega: T, w: T, c: T) -> Result<Self> {
        Ok(Factor { kernel: FoxHKernel::binomial(omega), scale: T::one() / gamma_fn(omega)?, w, c, exp_kernel: false })
    }

    /// `scale · H(w γ^c)` for an arbitrary kernel.
    pub fn fox(kernel: FoxHKernel<T>, scale: T, w: T, c: T) -> Self {
        Factor { kernel, scale, w, c, exp_kernel: false }
    }
}

/// Result of a moment integral and the route that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue<T = f64> {
    pub value: T,
    pub error: T,
    /// Number of contour integrals (0, 1 or 2) the closed form needed.
    pub dimension: usize,
    pub nodes: usize,
}

/// Evaluates `∫₀^∞ γ^{ν−1} e^{−δγ^b} Π factors dγ` in closed form.
///
/// More than two non-mergeable factors are rejected with [`Error::Unsupported`].
pub fn power_exp_integral<T: Real>(
    nu: T,
    delta: T,
    b: T,
    factors: &[Factor<T>],
    policy: &ContourPolicy<T>,
) -> Result<MomentValue<T>> {
    if !(nu > T::zero() && delta > T::zero() && b > T::zero()) {
        return Err(Error::domain("power_exp_integral", format!("need ν, δ, b > 0 (got {nu}, {delta}, {b})")));
    }
    let mut delta = delta;
    let mut rest: Vec<&Factor<T>> = Vec::new();
    for f in factors {
        if f.w == T::zero() {
            continue;
        }
        if f.exp_kernel && ((f.c - b) / b).abs() < T::epsilon() * T::from_usize_exact(16) {
            delta = delta + f.w;
        } else {
            rest.push(f);
        }
    }
    let ln_pref = -(b.ln() + nu / b * delta.ln());
    match rest.len() {
        0 => Ok(MomentValue { value: (ln_pref + ln_gamma_abs(nu / b)).exp(), error: T::zero(), dimension: 0, nodes: 0 }),
        1 => {
            let f = rest[0];
            let mut k = f.kernel.clone();
            k.a.insert(0, (T::one() - nu / b, f.c / b));
            k.n += 1;
            let z = f.w * delta.powf(-f.c / b);
            let h = fox_h_eval(&FoxHSpec::new(k, z)?, policy)?;
            let pref = ln_pref.exp() * f.scale;
            Ok(MomentValue { value: pref * h.value, error: (pref * h.error).abs(), dimension: 1, nodes: h.nodes })
        }
        2 => {
            let (f1, f2) = (rest[0], rest[1]);
            let spec = BivariateFoxHSpec {
                joint_num: vec![JointFactor { c0: nu / b, k1: -f1.c / b, k2: -f2.c / b }],
                joint_den: vec![],
                first: f1.kernel.clone(),
                second: f2.kernel.clone(),
                x: f1.w * delta.powf(-f1.c / b),
                y: f2.w * delta.powf(-f2.c / b),
            };
            let h = fox_h_bivariate_eval(&spec, policy)?;
            let pref = ln_pref.exp() * f1.scale * f2.scale;
            Ok(MomentValue {
                value: pref * h.value,
                error: (pref * h.error).abs(),
                dimension: 2,
                nodes: h.nodes[0] * h.nodes[1],
            })
        }
        n => Err(Error::Unsupported(format!("{n} non-mergeable kernels exceed the bivariate closed form"))),
    }
}

/// `∫₀^∞ γ^{ν−1} e^{−δγ^p} e^{−λγ^q} dγ` for integer powers `p`, `q` as a Meijer G
/// function (Gauss multiplication applied to both gamma factors):
///
/// `(1/q) λ^{−ν/q} q^{1/2} p^{ν/q−1/2} (2π)^{(2−p−q)/2}
///  G^{q,p}_{p,q}[δ^q p^p / (λ^p q^q) | Δ(p, 1−ν/q); Δ(q, 0)]`,
/// where `Δ(k, a) = a/k, (a+1)/k, …, (a+k−1)/k`.
pub fn exp_pair_moment_meijer<T: Real>(
    nu: T,
    delta: T,
    p: u32,
    lambda: T,
    q: u32,
    policy: &ContourPolicy<T>,
) -> Result<T> {
    if !(nu > T::zero() && delta > T::zero() && lambda > T::zero()) || p == 0 || q == 0 {
        return Err(Error::domain("exp_pair_moment_meijer", "need ν, δ, λ > 0 and positive integer powers"));
    }
    let (pt, qt) = (T::from_u32(p).unwrap(), T::from_u32(q).unwrap());
    let xi = nu / qt;
    let half = T::from_f64(0.5).unwrap();
    let a: Vec<T> = (0..p).map(|j| (T::one() - xi + T::from_u32(j).unwrap()) / pt).collect();
    let b: Vec<T> = (0..q).map(|j| T::from_u32(j).unwrap() / qt).collect();
    let ln_z = qt * delta.ln() + pt * pt.ln() - pt * lambda.ln() - qt * qt.ln();
    let g = meijer_g(&MeijerGSpec::new(q as usize, p as usize, a, b, ln_z.exp())?, policy)?;
    let ln_pref = -qt.ln() - xi * lambda.ln() + half * qt.ln() + (xi - half) * pt.ln()
        + (lit::<T>(2.0) - pt - qt) * half * (T::PI() + T::PI()).ln();
    Ok(ln_pref.exp() * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_half_line;

    fn pol() -> ContourPolicy<f64> {
        ContourPolicy::default()
    }

    #[test]
    fn pure_moment() {
        // ∫ γ^{1.5} e^{−2γ²} dγ = Γ(1.25) / (2 · 2^{1.25})
        let v = power_exp_integral(2.5, 2.0, 2.0, &[], &pol()).unwrap().value;
        let want = gamma_fn(1.25).unwrap() / (2.0 * 2f64.powf(1.25));
        assert!((v - want).abs() < 1e-14);
    }

    #[test]
    fn merged_exponentials() {
        // ∫ e^{−γ} e^{−γ} dγ = 1/2
        let r = power_exp_integral(1.0, 1.0, 1.0, &[Factor::exp(1.0, 1.0)], &pol()).unwrap();
        assert_eq!(r.dimension, 0);
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn forced_bivariate_equals_merged() {
        // An exponential passed as a generic kernel is not merged into δ, so the
        // same integral runs through the bivariate route.
        let (nu, d) = (2.0, 0.6);
        let bin = Factor::binomial(3.0, 0.8, 1.0).unwrap();
        let merged = power_exp_integral(nu, d, 1.0, &[Factor::exp(0.9, 1.0), bin.clone()], &pol()).unwrap();
        let forced = Factor::fox(FoxHKernel::exponential(), 1.0, 0.9, 1.0);
        let bivariate = power_exp_integral(nu, d, 1.0, &[forced, bin], &pol()).unwrap();
        assert_eq!((merged.dimension, bivariate.dimension), (1, 2));
        assert!(((merged.value - bivariate.value) / merged.value).abs() < 1e-8);
    }

    #[test]
    fn mismatched_exponential_against_quadrature() {
        let (nu, d, b, w, c) = (1.8, 0.7, 2.5, 1.3, 1.0);
        let r = power_exp_integral(nu, d, b, &[Factor::exp(w, c)], &pol()).unwrap();
        assert_eq!(r.dimension, 1);
        let q = integrate_half_line(|g: f64| g.powf(nu - 1.0) * (-d * g.powf(b) - w * g.powf(c)).exp(), 1.0, 1e-13)
            .unwrap()
            .value;
        assert!(((r.value - q) / q).abs() < 1e-9, "{} vs {q}", r.value);
    }

    #[test]
    fn binomial_and_exponential_bivariate() {
        let (nu, d, b) = (2.2, 0.4, 1.5);
        let fs = [Factor::binomial(2.0, 3.0, 1.0).unwrap(), Factor::exp(0.5, 0.5)];
        let r = power_exp_integral(nu, d, b, &fs, &pol()).unwrap();
        assert_eq!(r.dimension, 2);
        let q = integrate_half_line(
            |g: f64| g.powf(nu - 1.0) * (-d * g.powf(b) - 0.5 * g.sqrt()).exp() * (1.0 + 3.0 * g).powi(-2),
            1.0,
            1e-13,
        )
        .unwrap()
        .value;
        assert!(((r.value - q) / q).abs() < 1e-8, "{} vs {q}", r.value);
    }

    #[test]
    fn integer_power_pair_as_meijer_g() {
        for (nu, d, p, l, q) in [(2.0, 0.8, 2u32, 1.5, 1u32), (3.5, 2.0, 1, 0.3, 3), (1.0, 1.0, 2, 2.0, 2)] {
            let g = exp_pair_moment_meijer(nu, d, p, l, q, &pol()).unwrap();
            let h = power_exp_integral(nu, d, p as f64, &[Factor::fox(FoxHKernel::exponential(), 1.0, l, q as f64)], &pol())
                .unwrap()
                .value;
            assert!(((g - h) / h).abs() < 1e-9, "{g} vs {h}");
        }
        // α̃_e = α̃_r = 1 and λ = δ = 1: ∫ e^{−2γ} dγ = 1/2.
        assert!((exp_pair_moment_meijer(1.0, 1.0, 1, 1.0, 1, &pol()).unwrap() - 0.5).abs() < 1e-10);
    }
}
