use crate::channels::db_to_linear;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{factorial, gamma_p, ln_gamma_abs};

/// One α-μ fading link, parameterized by its average SNR in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfChannelParams<T = f64> {
    pub alpha: T,
    pub mu: u32,
    pub avg_snr_db: T,
}

impl<T: Real> RfChannelParams<T> {
    pub fn new(alpha: T, mu: u32, avg_snr_db: T) -> Result<Self> {
        let ch = RfChannelParams { alpha, mu, avg_snr_db };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::param("alpha", format!("{} must be positive and finite", self.alpha)));
        }
        if self.mu == 0 {
            return Err(Error::param("mu", "must be a positive integer"));
        }
        if !self.avg_snr_db.is_finite() {
            return Err(Error::param("avg_snr_db", "must be finite"));
        }
        Ok(())
    }

    /// α̃ = α/2.
    pub fn a_tilde(&self) -> T {
        self.alpha * lit(0.5)
    }

    /// Linear average SNR Φ.
    pub fn phi(&self) -> T {
        db_to_linear(self.avg_snr_db)
    }

    /// δ = Φ^{−α̃}.
    pub fn delta(&self) -> T {
        self.phi().powf(-self.a_tilde())
    }

    /// Θ = α̃μ − 1.
    pub fn theta(&self) -> T {
        self.a_tilde() * self.mu_t() - T::one()
    }

    pub fn mu_t(&self) -> T {
        T::from_u32(self.mu).expect("u32 fits")
    }
}

fn check_point<T: Real>(func: &'static str, gamma: T) -> Result<()> {
    if !(gamma >= T::zero()) {
        return Err(Error::domain(func, format!("SNR {gamma} must be non-negative")));
    }
    Ok(())
}

/// `f(γ) = α̃ δ^μ γ^Θ e^{−δγ^{α̃}} / Γ(μ)`.
pub fn alpha_mu_pdf<T: Real>(ch: &RfChannelParams<T>, gamma: T) -> Result<T> {
    ch.validate()?;
    check_point("alpha_mu_pdf", gamma)?;
    let a = ch.a_tilde();
    let ln = a.ln() + ch.mu_t() * ch.delta().ln() - ln_gamma_abs(ch.mu_t());
    if gamma == T::zero() {
        let th = ch.theta();
        return Ok(if th > T::zero() {
            T::zero()
        } else if th == T::zero() {
            ln.exp()
        } else {
            T::infinity()
        });
    }
    Ok((ln + ch.theta() * gamma.ln() - ch.delta() * gamma.powf(a)).exp())
}

/// `F(γ) = γ(μ, δγ^{α̃}) / Γ(μ)`.
pub fn alpha_mu_cdf<T: Real>(ch: &RfChannelParams<T>, gamma: T) -> Result<T> {
    ch.validate()?;
    check_point("alpha_mu_cdf", gamma)?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    gamma_p(ch.mu_t(), ch.delta() * gamma.powf(ch.a_tilde()))
}

/// Finite-sum form `1 − e^{−δγ^{α̃}} Σ_{m<μ} (δγ^{α̃})^m / m!`.
pub fn alpha_mu_cdf_finite<T: Real>(ch: &RfChannelParams<T>, gamma: T) -> Result<T> {
    ch.validate()?;
    check_point("alpha_mu_cdf_finite", gamma)?;
    let x = ch.delta() * gamma.powf(ch.a_tilde());
    let mut sum = T::zero();
    for m in 0..ch.mu as usize {
        sum = sum + x.powi(m as i32) / factorial::<T>(m);
    }
    Ok(T::one() - (-x).exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_half_line;

    #[test]
    fn exponential_reduction() {
        let ch = RfChannelParams::new(2.0, 1, 0.0).unwrap();
        assert!((alpha_mu_pdf(&ch, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert!((alpha_mu_cdf(&ch, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(alpha_mu_cdf(&ch, 0.0).unwrap(), 0.0);
        assert!(alpha_mu_cdf(&ch, -1.0).is_err());
    }

    #[test]
    fn normalization() {
        let ch = RfChannelParams::new(3.0, 2, 10.0 * 5.0f64.log10()).unwrap();
        let v = integrate_half_line(|g| alpha_mu_pdf(&ch, g).unwrap(), 5.0, 1e-12).unwrap().value;
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn reference_values() {
        // Reference values computed at 30 digits.
        let ch = RfChannelParams::new(3.0, 2, 10.0 * 2.0f64.log10()).unwrap();
        let v = alpha_mu_pdf(&ch, 1.0).unwrap();
        assert!((v / 0.131_660_343_998_729_92 - 1.0).abs() < 1e-12, "{v}");
        let ch = RfChannelParams::new(2.0, 2, 15.0).unwrap();
        let v: f64 = alpha_mu_cdf(&ch, 10.0).unwrap();
        assert!((v / 0.040_610_249_881_576_381 - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn rejects_invalid() {
        assert!(RfChannelParams::new(0.0, 1, 0.0).is_err());
        assert!(RfChannelParams::new(2.0, 0, 0.0).is_err());
        assert!(RfChannelParams::new(2.0, 1, f64::NAN).is_err());
    }
}
