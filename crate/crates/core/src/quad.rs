//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals and on `[a, ∞)`.
//!
//! Half-line integrals use `x = a + scale·e^u`, which turns algebraic endpoint
//! singularities at `a` into exponential decay and tail decay into double
//! exponential decay, so a finite `u`-window captures the integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound and evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadValue<T = f64> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn kronrod<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let c = (a + b) * lit(0.5);
    let h = (b - a) * lit(0.5);
    let fc = f(c);
    let mut k = fc * lit(WGK[7]);
    let mut g = fc * lit(WG[3]);
    for i in 0..7 {
        let dx = h * lit(XGK[i]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * lit(WGK[i]);
        if i % 2 == 1 {
            g = g + s * lit(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive integration over `[a, b]`, pre-split into `pieces` equal segments.
pub fn integrate_split<T: Real>(f: impl Fn(T) -> T, a: T, b: T, pieces: usize, tol: T) -> Result<QuadValue<T>> {
    let pieces = pieces.max(1);
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut err = T::zero();
    let width = (b - a) / T::from_usize_exact(pieces);
    for i in 0..pieces {
        let lo = a + width * T::from_usize_exact(i);
        let hi = if i + 1 == pieces { b } else { lo + width };
        let (v, e) = kronrod(&f, lo, hi);
        total = total + v;
        err = err + e;
        heap.push(Segment { a: lo, b: hi, value: v, error: e });
    }
    let mut evals = 15 * pieces;
    let limit = 20_000usize;
    while err > (tol * total.abs()).max(T::min_positive_value()) {
        if heap.len() >= limit {
            return Err(Error::Convergence {
                what: "adaptive quadrature".into(),
                last: total.to_f64_lossy(),
                previous: err.to_f64_lossy(),
            });
        }
        let seg = heap.pop().expect("non-empty");
        let mid = (seg.a + seg.b) * lit(0.5);
        let (v1, e1) = kronrod(&f, seg.a, mid);
        let (v2, e2) = kronrod(&f, mid, seg.b);
        evals += 30;
        total = total - seg.value + v1 + v2;
        err = err - seg.error + e1 + e2;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        if err < T::zero() {
            err = heap.iter().map(|s| s.error).sum();
        }
    }
    // Re-add in a fixed order so the result does not depend on heap internals.
    let mut segs: Vec<_> = heap.into_vec();
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = segs.iter().map(|s| s.value).sum();
    let error = segs.iter().map(|s| s.error).sum();
    Ok(QuadValue { value, error, evaluations: evals })
}

/// Adaptive integration over `[a, b]`.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> Result<QuadValue<T>> {
    integrate_split(f, a, b, 1, tol)
}

/// `∫₀^∞ f(x) dx`; `scale` is a typical abscissa of the integrand's mass.
pub fn integrate_half_line<T: Real>(f: impl Fn(T) -> T, scale: T, tol: T) -> Result<QuadValue<T>> {
    integrate_from(f, T::zero(), scale, tol)
}

/// `∫ₐ^∞ f(x) dx` through `x = a + scale·e^u`.
pub fn integrate_from<T: Real>(f: impl Fn(T) -> T, a: T, scale: T, tol: T) -> Result<QuadValue<T>> {
    if !(scale > T::zero()) {
        return Err(Error::param("scale", "must be positive"));
    }
    let g = |u: T| -> T {
        let e = u.exp();
        let x = a + scale * e;
        if !x.is_finite() || e == T::zero() {
            return T::zero();
        }
        let v = f(x) * scale * e;
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    let mut peak = g(T::zero()).abs();
    let cut = T::epsilon() * lit(1e-3);
    let ln_min = T::min_positive_value().ln() + lit(2.0);
    let ln_max = T::max_value().ln() - scale.ln().max(T::zero()) - lit(2.0);
    let mut edge = |dir: T, limit: T| -> T {
        let mut u = T::zero();
        let mut quiet = 0;
        loop {
            u = u + dir;
            if (u - limit) * dir >= T::zero() {
                return limit;
            }
            let v = g(u).abs();
            if v > peak {
                peak = v;
            }
            if v <= peak * cut {
                quiet += 1;
                if quiet >= 3 {
                    return u;
                }
            } else {
                quiet = 0;
            }
        }
    };
    let hi = edge(T::one(), ln_max.min(lit(700.0)));
    let lo = edge(-T::one(), ln_min.max(lit(-2000.0)));
    let pieces = ((hi - lo).to_f64_lossy().ceil() as usize).max(1);
    integrate_split(g, lo, hi, pieces, tol)
}
