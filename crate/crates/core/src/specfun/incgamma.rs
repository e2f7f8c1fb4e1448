//! Incomplete gamma functions: power series below `x = a + 1`, Lentz continued fraction above.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::gamma::{gamma_unchecked, ln_gamma_abs};

const MAX_ITER: usize = 100_000;

fn check<T: Real>(func: &'static str, a: T, x: T) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain(func, format!("shape {a} must be positive and finite")));
    }
    if !(x >= T::zero()) {
        return Err(Error::domain(func, format!("argument {x} must be non-negative")));
    }
    Ok(())
}

// e^{-x} x^a / Γ(a)
fn prefactor<T: Real>(a: T, x: T) -> T {
    (a * x.ln() - x - ln_gamma_abs(a)).exp()
}

fn series_p<T: Real>(a: T, x: T) -> Result<T> {
    let mut ap = a;
    let mut term = T::one() / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        term = term * x / ap;
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            return Ok(sum * prefactor(a, x));
        }
    }
    Err(Error::Convergence { what: "incomplete gamma series".into(), last: sum.to_f64_lossy(), previous: f64::NAN })
}

fn continued_fraction_q<T: Real>(a: T, x: T) -> Result<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::from_usize_exact(i);
        let an = -fi * (fi - a);
        b = b + lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() <= T::epsilon() {
            return Ok(h * prefactor(a, x));
        }
    }
    Err(Error::Convergence { what: "incomplete gamma continued fraction".into(), last: h.to_f64_lossy(), previous: f64::NAN })
}

/// Regularized pair `(P(a, x), Q(a, x))` with `P + Q = 1`.
pub fn regularized_gamma_pq<T: Real>(a: T, x: T) -> Result<(T, T)> {
    check("regularized_gamma", a, x)?;
    if x == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    if x.is_infinite() {
        return Ok((T::one(), T::zero()));
    }
    if x < a + T::one() {
        let p = series_p(a, x)?.min(T::one());
        Ok((p, T::one() - p))
    } else {
        let q = continued_fraction_q(a, x)?.min(T::one());
        Ok((T::one() - q, q))
    }
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
pub fn gamma_p<T: Real>(a: T, x: T) -> Result<T> {
    regularized_gamma_pq(a, x).map(|(p, _)| p)
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q<T: Real>(a: T, x: T) -> Result<T> {
    regularized_gamma_pq(a, x).map(|(_, q)| q)
}

/// Lower incomplete gamma `γ(a, x) = ∫₀ˣ t^{a−1} e^{−t} dt`.
pub fn lower_incomplete_gamma<T: Real>(a: T, x: T) -> Result<T> {
    check("lower_incomplete_gamma", a, x)?;
    Ok(gamma_p(a, x)? * gamma_unchecked(a))
}

/// Upper incomplete gamma `Γ(a, x) = ∫ₓ^∞ t^{a−1} e^{−t} dt`.
pub fn upper_incomplete_gamma<T: Real>(a: T, x: T) -> Result<T> {
    check("upper_incomplete_gamma", a, x)?;
    Ok(gamma_q(a, x)? * gamma_unchecked(a))
}
