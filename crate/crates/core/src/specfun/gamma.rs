//! Gamma function: real and complex logarithmic forms (Lanczos, g = 7, n = 9).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// ln Γ(x) for x ≥ 0.5.
fn ln_gamma_lanczos<T: Real>(x: T) -> T {
    let z = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (z + T::from_usize_exact(i));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    lit::<T>(0.5) * (T::PI() + T::PI()).ln() + (z + lit::<T>(0.5)) * t.ln() - t + acc.ln()
}

/// ln |Γ(x)| for any real x that is not a non-positive integer.
pub fn ln_gamma_abs<T: Real>(x: T) -> T {
    if x >= lit(0.5) {
        ln_gamma_lanczos(x)
    } else {
        let s = (T::PI() * x).sin().abs();
        T::PI().ln() - s.ln() - ln_gamma_lanczos(T::one() - x)
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("argument {x} must be positive and finite")));
    }
    Ok(ln_gamma_abs(x))
}

/// Γ(x) for x > 0, to about 14 significant digits in double precision.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("gamma_fn", format!("argument {x} must be positive and finite")));
    }
    Ok(gamma_unchecked(x))
}

// Direct product form keeps full relative precision below the overflow region.
pub(crate) fn gamma_unchecked<T: Real>(x: T) -> T {
    if x == x.round() && x >= T::one() && x <= lit(21.0) {
        return factorial(x.to_usize().expect("small integer") - 1);
    }
    if x < lit(0.5) {
        return T::PI() / ((T::PI() * x).sin() * gamma_unchecked(T::one() - x));
    }
    if x > lit(140.0) {
        return ln_gamma_lanczos(x).exp();
    }
    let z = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (z + T::from_usize_exact(i));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let half = t.powf((z + lit::<T>(0.5)) * lit(0.5));
    (T::PI() + T::PI()).sqrt() * half * (half * (-t).exp()) * acc
}

/// n! as a float.
pub fn factorial<T: Real>(n: usize) -> T {
    if n <= 20 {
        (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_exact(k))
    } else {
        gamma_unchecked(T::from_usize_exact(n + 1))
    }
}

/// Binomial coefficient C(n, k) as a float.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize_exact(n - i) / T::from_usize_exact(i + 1);
    }
    acc.round()
}

/// ln Γ(z) on the principal sheet up to a multiple of 2πi.
///
/// Only `exp` of sums of these values is ever formed, so the branch of the
/// imaginary part is irrelevant. Returns `+∞` real part at the poles.
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re >= lit(0.5) {
        return ln_gamma_lanczos_c(z);
    }
    // Reflection: ln Γ(z) = ln π − ln sin(πz) − ln Γ(1 − z).
    let pi = T::PI();
    let one = Complex::new(T::one(), T::zero());
    Complex::new(pi.ln(), T::zero()) - ln_sin_pi(z) - ln_gamma_lanczos_c(one - z)
}

fn ln_gamma_lanczos_c<T: Real>(x: Complex<T>) -> Complex<T> {
    let z = x - T::one();
    let mut acc = Complex::new(lit::<T>(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(lit::<T>(c), T::zero()) / (z + T::from_usize_exact(i));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let c0 = lit::<T>(0.5) * (T::PI() + T::PI()).ln();
    (z + lit::<T>(0.5)) * t.ln() - t + acc.ln() + c0
}

// ln sin(πz), written to stay finite for large |Im z|.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let pi = T::PI();
    let i = Complex::new(T::zero(), T::one());
    let two_i = Complex::new(T::zero(), lit(2.0));
    let w = z * pi;
    if z.im > T::zero() {
        // sin(w) = e^{-iw} (e^{2iw} − 1) / (2i)
        -(i * w) + ((i * w * lit::<T>(2.0)).exp() - T::one()).ln() - two_i.ln()
    } else if z.im < T::zero() {
        // sin(w) = e^{iw} (1 − e^{-2iw}) / (2i)
        i * w + (-(-(i * w) * lit::<T>(2.0)).exp() + T::one()).ln() - two_i.ln()
    } else {
        let s = w.re.sin();
        Complex::new(s.abs().ln(), if s < T::zero() { pi } else { T::zero() })
    }
}
