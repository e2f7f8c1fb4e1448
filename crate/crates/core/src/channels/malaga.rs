use crate::channels::db_to_linear;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{binomial, factorial, gamma_fn, meijer_g, ContourPolicy, MeijerGSpec};

/// Optical detection technique; the order `s` enters the SNR–irradiance power law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detection {
    /// Heterodyne detection, `s = 1`.
    Heterodyne,
    /// Intensity modulation with direct detection, `s = 2`.
    IntensityModulation,
}

impl Detection {
    pub fn order(self) -> u32 {
        match self {
            Detection::Heterodyne => 1,
            Detection::IntensityModulation => 2,
        }
    }

    pub fn from_order(s: u32) -> Result<Self> {
        match s {
            1 => Ok(Detection::Heterodyne),
            2 => Ok(Detection::IntensityModulation),
            _ => Err(Error::param("s", format!("detection order must be 1 or 2, got {s}"))),
        }
    }
}

/// Málaga turbulence with pointing error, detection order and blockage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsoLinkParams<T = f64> {
    pub alpha_o: T,
    pub beta_o: u32,
    /// Average power of the scattered component.
    pub g: T,
    /// Average power of the coherent components.
    pub omega: T,
    /// Pointing error parameter; larger is better aligned.
    pub epsilon: T,
    pub detection: Detection,
    pub avg_snr_db: T,
    /// Blockage probability P_o.
    pub blockage_p: T,
}

/// Derived constants of the Málaga density and distribution function.
/// Vectors are indexed by `m_o − 1` for `m_o = 1..=β_o`.
#[derive(Debug, Clone, PartialEq)]
pub struct MalagaConstants<T = f64> {
    pub chi: T,
    pub varpi: T,
    pub upsilon: Vec<T>,
    pub vartheta: Vec<T>,
    pub k: T,
    pub varsigma: Vec<T>,
    pub v: T,
    pub q1: Vec<T>,
    pub mu_s: T,
}

impl<T: Real> FsoLinkParams<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: T, name: &'static str| -> Result<()> {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} must be positive and finite")))
            }
        };
        pos(self.alpha_o, "alpha_o")?;
        pos(self.g, "g")?;
        pos(self.omega, "omega")?;
        pos(self.epsilon, "epsilon")?;
        if self.beta_o == 0 {
            return Err(Error::param("beta_o", "must be a positive integer"));
        }
        if !self.avg_snr_db.is_finite() {
            return Err(Error::param("phi_o_db", "must be finite"));
        }
        if !(self.blockage_p >= T::zero() && self.blockage_p <= T::one()) {
            return Err(Error::param("blockage_p", format!("{} must lie in [0, 1]", self.blockage_p)));
        }
        Ok(())
    }

    pub fn s(&self) -> u32 {
        self.detection.order()
    }

    fn s_t(&self) -> T {
        T::from_u32(self.s()).expect("small")
    }

    pub fn phi(&self) -> T {
        db_to_linear(self.avg_snr_db)
    }

    fn eps2(&self) -> T {
        self.epsilon * self.epsilon
    }

    pub fn constants(&self) -> Result<MalagaConstants<T>> {
        self.validate()?;
        let (al, g, om) = (self.alpha_o, self.g, self.omega);
        let be = T::from_u32(self.beta_o).expect("u32 fits");
        let e2 = self.eps2();
        let s = self.s_t();
        let gbo = g * be + om;
        let two = lit::<T>(2.0);
        let chi = two * al.powf(al / two) / (g.powf(T::one() + al / two) * gamma_fn(al)?)
            * (g * be / gbo).powf(be + al / two);
        let varpi = e2 * al * be * (g + om) / ((e2 + T::one()) * gbo);
        let mut upsilon = Vec::with_capacity(self.beta_o as usize);
        let mut vartheta = Vec::with_capacity(self.beta_o as usize);
        let mut varsigma = Vec::with_capacity(self.beta_o as usize);
        for m in 1..=self.beta_o as usize {
            let mt = T::from_usize_exact(m);
            let u = binomial::<T>(self.beta_o as usize - 1, m - 1) * gbo.powf(T::one() - mt / two)
                / factorial::<T>(m - 1)
                * (om / g).powi(m as i32 - 1)
                * (al / be).powf(mt / two);
            let th = u * (al * be / gbo).powf(-(al + mt) / two);
            upsilon.push(u);
            vartheta.push(th);
            varsigma.push(th * s.powf(al + mt - T::one()));
        }
        let two_pi = T::PI() * two;
        let k = e2 * chi / (two.powf(s) * two_pi.powf(s - T::one()));
        let v = varpi.powf(s) / s.powf(two * s);
        let q1 = (1..=self.s()).map(|i| (e2 + T::from_u32(i).unwrap()) / s).collect();
        Ok(MalagaConstants { chi, varpi, upsilon, vartheta, k, varsigma, v, q1, mu_s: electrical_snr(self)? })
    }
}

impl<T: Real> MalagaConstants<T> {
    /// Lower parameters `{ε²/s…, α/s…, m/s…}` of the distribution-function kernel for one `m_o`.
    pub fn q2(&self, fso: &FsoLinkParams<T>, m_o: u32) -> Vec<T> {
        let s = fso.s();
        let st = T::from_u32(s).unwrap();
        let e2 = fso.epsilon * fso.epsilon;
        let m = T::from_u32(m_o).unwrap();
        let mut out = Vec::with_capacity(3 * s as usize);
        for base in [e2, fso.alpha_o, m] {
            for i in 0..s {
                out.push((base + T::from_u32(i).unwrap()) / st);
            }
        }
        out
    }

    /// `G^{3s,1}_{s+1,3s+1}[z | 1, q1; q2, 0]` specification for one `m_o`.
    pub fn cdf_kernel(&self, fso: &FsoLinkParams<T>, m_o: u32, z: T) -> Result<MeijerGSpec<T>> {
        let s = fso.s() as usize;
        let mut a = vec![T::one()];
        a.extend(self.q1.iter().copied());
        let mut b = self.q2(fso, m_o);
        b.push(T::zero());
        MeijerGSpec::new(3 * s, 1, a, b, z)
    }

    /// `G^{3,0}_{1,3}[z | ε²+1; ε², α, m]` specification for one `m_o`.
    pub fn pdf_kernel(&self, fso: &FsoLinkParams<T>, m_o: u32, z: T) -> Result<MeijerGSpec<T>> {
        let e2 = fso.epsilon * fso.epsilon;
        MeijerGSpec::new(3, 0, vec![e2 + T::one()], vec![e2, fso.alpha_o, T::from_u32(m_o).unwrap()], z)
    }
}

/// Electrical SNR μ_s: μ₁ = Φ_o for heterodyne detection, μ₂ for IM/DD.
pub fn electrical_snr<T: Real>(fso: &FsoLinkParams<T>) -> Result<T> {
    fso.validate()?;
    let phi = fso.phi();
    match fso.detection {
        Detection::Heterodyne => Ok(phi),
        Detection::IntensityModulation => {
            let (al, g, om) = (fso.alpha_o, fso.g, fso.omega);
            let be = T::from_u32(fso.beta_o).unwrap();
            let e2 = fso.eps2();
            let two = lit::<T>(2.0);
            let num = al * e2 * (e2 + two) * (g + om);
            let den = (e2 + T::one()).powi(2)
                * (al + T::one())
                * (two * g * (g + two * om) + om * om * (T::one() + T::one() / be));
            Ok(phi * num / den)
        }
    }
}

pub fn malaga_pdf_with<T: Real>(fso: &FsoLinkParams<T>, gamma: T, policy: &ContourPolicy<T>) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::domain("malaga_pdf", format!("SNR {gamma} must be positive")));
    }
    let c = fso.constants()?;
    let s = fso.s_t();
    let z = c.varpi * (gamma / c.mu_s).powf(T::one() / s);
    let mut sum = T::zero();
    for (i, &th) in c.vartheta.iter().enumerate() {
        let spec = c.pdf_kernel(fso, i as u32 + 1, z)?;
        sum = sum + th * meijer_g(&spec, policy).map_err(|e| e.context("malaga_pdf"))?;
    }
    Ok((fso.eps2() * c.chi / (lit::<T>(2.0).powf(s) * gamma) * sum).max(T::zero()))
}

/// Málaga density of the unblocked electrical SNR.
pub fn malaga_pdf<T: Real>(fso: &FsoLinkParams<T>, gamma: T) -> Result<T> {
    malaga_pdf_with(fso, gamma, &ContourPolicy::default())
}

pub fn malaga_cdf_with<T: Real>(fso: &FsoLinkParams<T>, gamma: T, policy: &ContourPolicy<T>) -> Result<T> {
    if !(gamma >= T::zero()) {
        return Err(Error::domain("malaga_cdf", format!("SNR {gamma} must be non-negative")));
    }
    let c = fso.constants()?;
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    if gamma.is_infinite() {
        return Ok(T::one());
    }
    let z = c.v * gamma / c.mu_s;
    let mut sum = T::zero();
    for (i, &vs) in c.varsigma.iter().enumerate() {
        let spec = c.cdf_kernel(fso, i as u32 + 1, z)?;
        sum = sum + vs * meijer_g(&spec, policy).map_err(|e| e.context("malaga_cdf"))?;
    }
    Ok((c.k * sum).max(T::zero()).min(T::one()))
}

/// Málaga distribution function of the unblocked electrical SNR.
pub fn malaga_cdf<T: Real>(fso: &FsoLinkParams<T>, gamma: T) -> Result<T> {
    malaga_cdf_with(fso, gamma, &ContourPolicy::default())
}

pub fn fso_blocked_cdf_with<T: Real>(fso: &FsoLinkParams<T>, gamma: T, policy: &ContourPolicy<T>) -> Result<T> {
    let p = fso.blockage_p;
    if p == T::one() {
        fso.validate()?;
        if !(gamma >= T::zero()) {
            return Err(Error::domain("fso_blocked_cdf", format!("SNR {gamma} must be non-negative")));
        }
        return Ok(T::one());
    }
    Ok(p + (T::one() - p) * malaga_cdf_with(fso, gamma, policy)?)
}

/// Distribution function of the FSO SNR including the blockage atom at zero.
pub fn fso_blocked_cdf<T: Real>(fso: &FsoLinkParams<T>, gamma: T) -> Result<T> {
    fso_blocked_cdf_with(fso, gamma, &ContourPolicy::default())
}
