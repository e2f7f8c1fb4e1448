//! Meijer G, Fox H and the extended generalized bivariate Fox H function.
//!
//! Conventions (all integrals along upward vertical lines):
//!
//! ```text
//! H^{m,n}_{p,q}[z] = 1/(2πi) ∫ Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 − a_j − A_j s)
//!                            / (Π_{j>m} Γ(1 − b_j − B_j s) Π_{j>n} Γ(a_j + A_j s)) z^{−s} ds
//! ```
//!
//! The bivariate function multiplies two such kernels (in `s` and `t`) by a
//! joint group of `Γ(c0 + k1 s + k2 t)^{±1}` factors and integrates `x^{−s} y^{−t}`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::contour::{
    double_integral, line_integral, ContourPolicy, Double, GammaTerm, JointFactor, MbValue, MbValue2,
};

/// Orders and parameter pairs of a Fox H kernel, without its argument.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHKernel<T = f64> {
    pub m: usize,
    pub n: usize,
    /// Upper pairs `(a_j, A_j)`; `p = a.len()`.
    pub a: Vec<(T, T)>,
    /// Lower pairs `(b_j, B_j)`; `q = b.len()`.
    pub b: Vec<(T, T)>,
}

impl<T: Real> FoxHKernel<T> {
    pub fn new(m: usize, n: usize, a: Vec<(T, T)>, b: Vec<(T, T)>) -> Result<Self> {
        let k = FoxHKernel { m, n, a, b };
        k.validate()?;
        Ok(k)
    }

    /// `H^{1,0}_{0,1}[z | (0, 1)] = e^{−z}`.
    pub fn exponential() -> Self {
        FoxHKernel { m: 1, n: 0, a: vec![], b: vec![(T::zero(), T::one())] }
    }

    /// `H^{1,1}_{1,1}[z | (1 − ω, 1); (0, 1)] = Γ(ω) (1 + z)^{−ω}`.
    pub fn binomial(omega: T) -> Self {
        FoxHKernel { m: 1, n: 1, a: vec![(T::one() - omega, T::one())], b: vec![(T::zero(), T::one())] }
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > self.q() || self.n > self.p() {
            return Err(Error::param(
                "orders",
                format!("need m ≤ q and n ≤ p, got m={}, n={}, p={}, q={}", self.m, self.n, self.p(), self.q()),
            ));
        }
        if self.m + self.n == 0 {
            return Err(Error::param("orders", "m + n must be positive"));
        }
        for &(x, c) in self.a.iter().chain(self.b.iter()) {
            if !x.is_finite() || !(c > T::zero()) || !c.is_finite() {
                return Err(Error::param("coefficients", format!("pair ({x}, {c}) needs a finite parameter and positive coefficient")));
            }
        }
        Ok(())
    }

    pub(crate) fn gamma_terms(&self) -> Vec<GammaTerm<T>> {
        let mut out = Vec::with_capacity(self.p() + self.q());
        for (j, &(b, bb)) in self.b.iter().enumerate() {
            if j < self.m {
                out.push(GammaTerm::num(b, bb));
            } else {
                out.push(GammaTerm::den(T::one() - b, -bb));
            }
        }
        for (j, &(a, aa)) in self.a.iter().enumerate() {
            if j < self.n {
                out.push(GammaTerm::num(T::one() - a, -aa));
            } else {
                out.push(GammaTerm::den(a, aa));
            }
        }
        out
    }
}

/// A univariate Fox H function at a positive argument.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec<T = f64> {
    pub kernel: FoxHKernel<T>,
    pub z: T,
}

impl<T: Real> FoxHSpec<T> {
    pub fn new(kernel: FoxHKernel<T>, z: T) -> Result<Self> {
        let s = FoxHSpec { kernel, z };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        if !(self.z > T::zero()) || !self.z.is_finite() {
            return Err(Error::domain("fox_h", format!("argument {} must be positive and finite", self.z)));
        }
        Ok(())
    }
}

/// A Meijer G function at a positive argument.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec<T = f64> {
    pub m: usize,
    pub n: usize,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub z: T,
}

impl<T: Real> MeijerGSpec<T> {
    pub fn new(m: usize, n: usize, a: Vec<T>, b: Vec<T>, z: T) -> Result<Self> {
        let s = MeijerGSpec { m, n, a, b, z };
        s.to_fox()?;
        Ok(s)
    }

    /// The equivalent Fox H specification with unit coefficients.
    pub fn to_fox(&self) -> Result<FoxHSpec<T>> {
        let kernel = FoxHKernel {
            m: self.m,
            n: self.n,
            a: self.a.iter().map(|&x| (x, T::one())).collect(),
            b: self.b.iter().map(|&x| (x, T::one())).collect(),
        };
        FoxHSpec::new(kernel, self.z)
    }
}

/// Evaluates `H^{m,n}_{p,q}[z]` with quadrature diagnostics.
pub fn fox_h_eval<T: Real>(spec: &FoxHSpec<T>, policy: &ContourPolicy<T>) -> Result<MbValue<T>> {
    spec.validate()?;
    let terms = spec.kernel.gamma_terms();
    line_integral(&terms, spec.z.ln(), policy, "fox_h")
}

/// Evaluates `H^{m,n}_{p,q}[z]`.
pub fn fox_h<T: Real>(spec: &FoxHSpec<T>, policy: &ContourPolicy<T>) -> Result<T> {
    fox_h_eval(spec, policy).map(|v| v.value)
}

/// Evaluates `G^{m,n}_{p,q}[z]` with quadrature diagnostics.
pub fn meijer_g_eval<T: Real>(spec: &MeijerGSpec<T>, policy: &ContourPolicy<T>) -> Result<MbValue<T>> {
    let fox = spec.to_fox()?;
    let terms = fox.kernel.gamma_terms();
    line_integral(&terms, fox.z.ln(), policy, "meijer_g")
}

/// Evaluates `G^{m,n}_{p,q}[z]`.
pub fn meijer_g<T: Real>(spec: &MeijerGSpec<T>, policy: &ContourPolicy<T>) -> Result<T> {
    meijer_g_eval(spec, policy).map(|v| v.value)
}

/// Extended generalized bivariate Fox H function.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateFoxHSpec<T = f64> {
    /// Joint factors in the numerator.
    pub joint_num: Vec<JointFactor<T>>,
    /// Joint factors in the denominator.
    pub joint_den: Vec<JointFactor<T>>,
    pub first: FoxHKernel<T>,
    pub second: FoxHKernel<T>,
    pub x: T,
    pub y: T,
}

impl<T: Real> BivariateFoxHSpec<T> {
    /// Builds the function from the classical parameter layout
    /// `H^{0,n1 : m2,n2 ; m3,n3}_{p1,q1 : p2,q2 ; p3,q3}` with joint upper triples
    /// `(a_j; α_j, A_j)` (the first `n1` in the numerator as `Γ(1 − a_j − α_j s − A_j t)`,
    /// the rest in the denominator as `Γ(a_j + α_j s + A_j t)`) and joint lower triples
    /// `(b_j; β_j, B_j)` entering as `1/Γ(1 − b_j − β_j s − B_j t)`.
    pub fn from_classical(
        n1: usize,
        upper: &[(T, T, T)],
        lower: &[(T, T, T)],
        first: FoxHKernel<T>,
        second: FoxHKernel<T>,
        x: T,
        y: T,
    ) -> Result<Self> {
        if n1 > upper.len() {
            return Err(Error::param("n1", "exceeds the number of joint upper parameters"));
        }
        let mut joint_num = Vec::new();
        let mut joint_den = Vec::new();
        for (j, &(a, al, aa)) in upper.iter().enumerate() {
            if j < n1 {
                joint_num.push(JointFactor { c0: T::one() - a, k1: -al, k2: -aa });
            } else {
                joint_den.push(JointFactor { c0: a, k1: al, k2: aa });
            }
        }
        for &(b, be, bb) in lower {
            joint_den.push(JointFactor { c0: T::one() - b, k1: -be, k2: -bb });
        }
        let spec = BivariateFoxHSpec { joint_num, joint_den, first, second, x, y };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.first.validate()?;
        self.second.validate()?;
        for (v, name) in [(self.x, "x"), (self.y, "y")] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain("fox_h_bivariate", format!("argument {name} = {v} must be positive and finite")));
            }
        }
        for f in self.joint_num.iter().chain(self.joint_den.iter()) {
            if !(f.c0.is_finite() && f.k1.is_finite() && f.k2.is_finite()) {
                return Err(Error::param("joint", "non-finite joint factor"));
            }
        }
        Ok(())
    }
}

/// Evaluates the bivariate function with per-axis diagnostics.
pub fn fox_h_bivariate_eval<T: Real>(spec: &BivariateFoxHSpec<T>, policy: &ContourPolicy<T>) -> Result<MbValue2<T>> {
    spec.validate()?;
    let first = spec.first.gamma_terms();
    let second = spec.second.gamma_terms();
    let d = Double {
        joint_num: &spec.joint_num,
        joint_den: &spec.joint_den,
        first: &first,
        second: &second,
        ln_x: spec.x.ln(),
        ln_y: spec.y.ln(),
    };
    double_integral(&d, policy, "fox_h_bivariate")
}

/// Evaluates the bivariate function.
pub fn fox_h_bivariate<T: Real>(spec: &BivariateFoxHSpec<T>, policy: &ContourPolicy<T>) -> Result<T> {
    fox_h_bivariate_eval(spec, policy).map(|v| v.value)
}
