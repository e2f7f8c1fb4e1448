//! Mellin–Barnes line integrals evaluated by the trapezoidal rule.
//!
//! An integrand is a product of gamma factors `Γ(c0 + k·s)^{±1}` times `z^{-s}`.
//! The abscissa sits strictly between the left pole family (numerator factors
//! with `k > 0`) and the right pole family (`k < 0`), at the real-axis minimum
//! of the integrand modulus. On that line the integrand is analytic in a strip,
//! so trapezoidal sums converge geometrically in the step and the difference
//! of two successive halvings is a reliable error estimate.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::gamma::{ln_gamma_abs, ln_gamma_complex};

/// Controls placement, truncation and refinement of Mellin–Barnes contours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPolicy<T = f64> {
    /// Fixed abscissa; `None` selects the saddle automatically.
    pub abscissa: Option<T>,
    /// Fixed half-length of the truncated line; `None` selects it from the decay.
    pub half_length: Option<T>,
    /// Minimum node count on the first pass (per axis).
    pub nodes: usize,
    /// When false, exactly one halving is performed and its difference reported.
    pub adaptive: bool,
    /// Target relative tolerance.
    pub tolerance: T,
    /// Refinement stops with a convergence error beyond this node count per axis.
    pub max_nodes: usize,
}

impl<T: Real> Default for ContourPolicy<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        ContourPolicy {
            abscissa: None,
            half_length: None,
            nodes: 64,
            adaptive: true,
            tolerance: lit::<T>(1e-8).max(eps * lit(100.0)),
            max_nodes: 1 << 16,
        }
    }
}

impl<T: Real> ContourPolicy<T> {
    pub fn with_tolerance(tolerance: T) -> Self {
        ContourPolicy { tolerance, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 64 {
            return Err(Error::param("nodes", format!("{} is below the minimum of 64", self.nodes)));
        }
        if !(self.tolerance > T::zero() && self.tolerance < T::one()) {
            return Err(Error::param("tolerance", format!("{} must lie in (0, 1)", self.tolerance)));
        }
        if self.max_nodes < self.nodes {
            return Err(Error::param("max_nodes", "must not be smaller than the initial node count"));
        }
        if let Some(h) = self.half_length {
            if !(h > T::zero()) {
                return Err(Error::param("half_length", "must be positive"));
            }
        }
        Ok(())
    }
}

/// Value of a line integral together with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbValue<T = f64> {
    pub value: T,
    /// Absolute error estimate from the last halving.
    pub error: T,
    pub abscissa: T,
    pub half_length: T,
    pub step: T,
    /// Nodes on the final line.
    pub nodes: usize,
}

/// Diagnostics of a double contour integral, one entry per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbValue2<T = f64> {
    pub value: T,
    pub error: T,
    pub abscissa: [T; 2],
    pub half_length: [T; 2],
    pub step: [T; 2],
    pub nodes: [usize; 2],
    /// Change caused by the last halving along each axis.
    pub axis_error: [T; 2],
}

/// `Γ(c0 + k·s)` in the numerator, or its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GammaTerm<T> {
    pub c0: T,
    pub k: T,
    pub numerator: bool,
}

impl<T: Real> GammaTerm<T> {
    pub fn num(c0: T, k: T) -> Self {
        GammaTerm { c0, k, numerator: true }
    }
    pub fn den(c0: T, k: T) -> Self {
        GammaTerm { c0, k, numerator: false }
    }
}

/// Strip `(left, right)` free of poles; infinite sides are `∓∞`.
pub(crate) fn pole_strip<T: Real>(terms: &[GammaTerm<T>]) -> (T, T) {
    let mut left = T::neg_infinity();
    let mut right = T::infinity();
    for g in terms.iter().filter(|g| g.numerator && g.k != T::zero()) {
        let p = -g.c0 / g.k;
        if g.k > T::zero() {
            left = left.max(p);
        } else {
            right = right.min(p);
        }
    }
    (left, right)
}

pub(crate) fn ln_theta<T: Real>(terms: &[GammaTerm<T>], s: Complex<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for g in terms {
        let lg = ln_gamma_complex(s * g.k + g.c0);
        if g.numerator {
            acc = acc + lg;
        } else {
            acc = acc - lg;
        }
    }
    acc
}

fn ln_theta_real<T: Real>(terms: &[GammaTerm<T>], s: T) -> T {
    terms.iter().fold(T::zero(), |acc, g| {
        let lg = ln_gamma_abs(g.c0 + g.k * s);
        if g.numerator {
            acc + lg
        } else {
            acc - lg
        }
    })
}

/// Smoothed log-modulus used for abscissa selection. Taking the larger of the
/// real-axis value and a point just off the axis keeps the search away from
/// the isolated zeros contributed by denominator factors.
fn objective<T: Real>(terms: &[GammaTerm<T>], ln_z: T, c: T) -> T {
    let on_axis = ln_theta_real(terms, c) - c * ln_z;
    let off = ln_theta(terms, Complex::new(c, lit(0.5))).re - c * ln_z;
    let v = on_axis.max(off);
    if v.is_nan() {
        T::infinity()
    } else {
        v
    }
}

// Golden-section refinement of a one-dimensional objective on [a, b].
pub(crate) fn golden_min<T: Real>(mut a: T, mut b: T, f: impl Fn(T) -> T, iters: usize) -> T {
    let r = lit::<T>(0.618_033_988_749_894_8);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Searches `[lo, hi]` (one side possibly infinite) for the minimum of `f`.
pub(crate) fn minimize_on_interval<T: Real>(lo: T, hi: T, f: impl Fn(T) -> T) -> T {
    let grid = |a: T, b: T| -> T {
        let n = 32usize;
        let mut best = (T::infinity(), a);
        let step = (b - a) / T::from_usize_exact(n);
        for i in 0..=n {
            let x = a + step * T::from_usize_exact(i);
            let v = f(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        let a2 = (best.1 - step).max(a);
        let b2 = (best.1 + step).min(b);
        golden_min(a2, b2, &f, 30)
    };
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => grid(lo, hi),
        (true, false) | (false, true) => {
            let (anchor, dir) = if lo.is_finite() { (lo, T::one()) } else { (hi, -T::one()) };
            let mut width = lit::<T>(0.5);
            let mut prev = f(anchor);
            let mut rises = 0;
            for _ in 0..14 {
                let v = f(anchor + dir * width);
                if v > prev {
                    rises += 1;
                    if rises == 2 {
                        break;
                    }
                } else {
                    rises = 0;
                }
                prev = v;
                width = width * lit(2.0);
            }
            let far = anchor + dir * width;
            if lo.is_finite() {
                grid(anchor, far)
            } else {
                grid(far, anchor)
            }
        }
        (false, false) => T::zero(),
    }
}

/// Selects the abscissa for a univariate integrand.
pub(crate) fn choose_abscissa<T: Real>(terms: &[GammaTerm<T>], ln_z: T, what: &str) -> Result<(T, T, T)> {
    let (left, right) = pole_strip(terms);
    if !(left < right) {
        return Err(Error::Contour(format!(
            "{what}: left poles reach {left} and right poles start at {right}; no separating line exists"
        )));
    }
    if left == T::neg_infinity() && right == T::infinity() {
        return Err(Error::Contour(format!("{what}: integrand has no pole family to anchor the contour")));
    }
    let margin = if left.is_finite() && right.is_finite() {
        (right - left) * lit(1e-3)
    } else {
        lit(1e-3)
    };
    let c = minimize_on_interval(left + margin, right - margin, |c| objective(terms, ln_z, c));
    Ok((c, left, right))
}

fn decay_cut<T: Real>() -> T {
    (T::epsilon() * lit(10.0)).ln()
}

/// Finds a half-length beyond which `ln_mod(τ)` stays below `ln_peak + ln(10 eps)`.
pub(crate) fn truncation<T: Real>(ln_mod: impl Fn(T) -> T, ln_peak0: T, what: &str) -> Result<(T, T)> {
    let mut ln_peak = ln_peak0;
    let mut tau = lit::<T>(1.0);
    let cap = lit::<T>(8192.0);
    loop {
        let v = ln_mod(tau).max(ln_mod(-tau));
        if v > ln_peak {
            ln_peak = v;
        }
        if v < ln_peak + decay_cut::<T>() {
            // Confirm decay persists a little further out.
            let w = ln_mod(tau * lit(1.5)).max(ln_mod(-tau * lit(1.5)));
            if w < ln_peak + decay_cut::<T>() {
                // Tighten within (τ/2, τ]; the modulus decays monotonically out here.
                let (mut lo, mut hi) = (tau * lit(0.5), tau);
                for _ in 0..5 {
                    let mid = (lo + hi) * lit(0.5);
                    if ln_mod(mid).max(ln_mod(-mid)) < ln_peak + decay_cut::<T>() {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok((hi, ln_peak));
            }
        }
        tau = tau * lit(2.0);
        if tau > cap {
            return Err(Error::Convergence {
                what: format!("{what}: integrand does not decay along the contour"),
                last: v.to_f64_lossy(),
                previous: ln_peak.to_f64_lossy(),
            });
        }
    }
}

/// Univariate line integral `(1/2πi) ∫ Θ(s) z^{-s} ds`, scaled by `e^{ln_scale}`.
pub(crate) fn line_integral<T: Real>(
    terms: &[GammaTerm<T>],
    ln_z: T,
    policy: &ContourPolicy<T>,
    what: &str,
) -> Result<MbValue<T>> {
    policy.validate()?;
    let (c, left, right) = match policy.abscissa {
        Some(c) => {
            let (l, r) = pole_strip(terms);
            if !(l < c && c < r) {
                return Err(Error::Contour(format!("{what}: abscissa {c} lies outside the pole-free strip ({l}, {r})")));
            }
            (c, l, r)
        }
        None => choose_abscissa(terms, ln_z, what)?,
    };
    let ln_f = |tau: T| -> Complex<T> {
        let s = Complex::new(c, tau);
        ln_theta(terms, s) - s * ln_z
    };
    let ln_peak0 = ln_f(T::zero()).re;
    let (half, ln_peak) = match policy.half_length {
        Some(h) => (h, ln_peak0),
        None => truncation(|t| ln_f(t).re, ln_peak0, what)?,
    };
    // Realness check: the integrand must be conjugate-symmetric about the real axis.
    for tau in [half * lit(0.5), half] {
        let up = ln_f(tau);
        let down = ln_f(-tau);
        let mismatch = (up.re - down.re).abs() + ((up.im + down.im).sin()).abs();
        if up.re - ln_peak > lit(-30.0) && mismatch > lit(1e-6) {
            return Err(Error::Convergence {
                what: format!("{what}: integrand is not conjugate-symmetric; result would not be real"),
                last: up.re.to_f64_lossy(),
                previous: down.re.to_f64_lossy(),
            });
        }
    }
    let dist = (c - left).min(right - c);
    let mut step = (dist * lit(0.5)).min(lit(0.5)).min(half * lit(2.0) / T::from_usize_exact(policy.nodes));
    let count = |h: T| (half / h).ceil().to_usize().unwrap_or(usize::MAX);
    let too_many = |h: T| count(h).checked_mul(2).is_none_or(|n| n + 1 > policy.max_nodes);
    if too_many(step) {
        return Err(Error::Convergence {
            what: format!("{what}: pole-free strip too narrow for the node budget"),
            last: f64::NAN,
            previous: f64::NAN,
        });
    }
    // Folded line: F(c − iτ) is the conjugate of F(c + iτ), so the integral is
    // the real part of the τ ≥ 0 half counted twice, minus the τ = 0 node once.
    let node = |tau: T| -> (T, T) {
        let v = (ln_f(tau) - ln_peak).exp();
        (v.re, v.norm())
    };
    let mut n = count(step);
    let (mut raw, mut raw_abs) = {
        let (v0, a0) = node(T::zero());
        let mut acc = v0;
        let mut abs = a0;
        for j in 1..=n {
            let (v, a) = node(step * T::from_usize_exact(j));
            acc = acc + v * lit(2.0);
            abs = abs + a * lit(2.0);
        }
        (acc, abs)
    };
    let mut prev = raw * step;
    loop {
        let h = step * lit(0.5);
        if too_many(h) {
            return Err(Error::Convergence {
                what: what.to_string(),
                last: scale_out(prev / (T::PI() + T::PI()), ln_peak).to_f64_lossy(),
                previous: f64::NAN,
            });
        }
        // Only the odd nodes of the finer grid are new.
        let n_new = count(h);
        for j in (1..=n_new).filter(|j| j % 2 == 1 || *j > 2 * n) {
            let (v, a) = node(h * T::from_usize_exact(j));
            raw = raw + v * lit(2.0);
            raw_abs = raw_abs + a * lit(2.0);
        }
        n = n_new;
        let cur = raw * h;
        let abs = raw_abs * h;
        let err = (cur - prev).abs();
        let floor = abs * T::epsilon() * lit(1e3);
        let accept = err <= (policy.tolerance * cur.abs()).max(floor);
        if accept || !policy.adaptive {
            let two_pi = T::PI() + T::PI();
            return Ok(MbValue {
                value: scale_out(cur / two_pi, ln_peak),
                error: scale_out(err.max(floor) / two_pi, ln_peak),
                abscissa: c,
                half_length: half,
                step: h,
                nodes: 2 * n + 1,
            });
        }
        prev = cur;
        step = h;
    }
}

fn scale_out<T: Real>(x: T, ln_peak: T) -> T {
    if x == T::zero() {
        x
    } else {
        x * ln_peak.exp()
    }
}

/// Gamma factor of two contour variables, `Γ(c0 + k1·s + k2·t)^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointFactor<T = f64> {
    pub c0: T,
    pub k1: T,
    pub k2: T,
}

pub(crate) struct Double<'a, T> {
    pub joint_num: &'a [JointFactor<T>],
    pub joint_den: &'a [JointFactor<T>],
    pub first: &'a [GammaTerm<T>],
    pub second: &'a [GammaTerm<T>],
    pub ln_x: T,
    pub ln_y: T,
}

impl<T: Real> Double<'_, T> {
    fn ln_joint(&self, s: Complex<T>, t: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for f in self.joint_num {
            acc = acc + ln_gamma_complex(s * f.k1 + t * f.k2 + f.c0);
        }
        for f in self.joint_den {
            acc = acc - ln_gamma_complex(s * f.k1 + t * f.k2 + f.c0);
        }
        acc
    }

    fn ln_joint_real(&self, s: T, t: T) -> T {
        let mut acc = T::zero();
        for f in self.joint_num {
            acc = acc + ln_gamma_abs(f.c0 + f.k1 * s + f.k2 * t);
        }
        for f in self.joint_den {
            acc = acc - ln_gamma_abs(f.c0 + f.k1 * s + f.k2 * t);
        }
        acc
    }

    fn ln_f(&self, s: Complex<T>, t: Complex<T>) -> Complex<T> {
        self.ln_joint(s, t) + ln_theta(self.first, s) + ln_theta(self.second, t) - s * self.ln_x - t * self.ln_y
    }

    fn objective(&self, c1: T, c2: T) -> T {
        let on = self.ln_joint_real(c1, c2) + ln_theta_real(self.first, c1) + ln_theta_real(self.second, c2)
            - c1 * self.ln_x
            - c2 * self.ln_y;
        let half = lit::<T>(0.5);
        let off = self.ln_f(Complex::new(c1, half), Complex::new(c2, half)).re;
        let v = on.max(off);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    }

    fn slack(&self, c1: T, c2: T) -> T {
        self.joint_num.iter().fold(T::infinity(), |m, f| m.min(f.c0 + f.k1 * c1 + f.k2 * c2))
    }
}

/// Double line integral over a product contour.
pub(crate) fn double_integral<T: Real>(d: &Double<'_, T>, policy: &ContourPolicy<T>, what: &str) -> Result<MbValue2<T>> {
    policy.validate()?;
    let (l1, r1) = pole_strip(d.first);
    let (l2, r2) = pole_strip(d.second);
    if !(l1 < r1) || !(l2 < r2) {
        return Err(Error::Contour(format!("{what}: a kernel has overlapping pole families")));
    }
    let (c1, c2) = choose_abscissa2(d, (l1, r1), (l2, r2), what)?;
    let slack = d.slack(c1, c2);
    let ln_peak0 = d.ln_f(Complex::new(c1, T::zero()), Complex::new(c2, T::zero())).re;

    // Each marginal bounds the integrand when the joint group has only numerator
    // factors: |Γ(x + iy)| ≤ Γ(x) for x > 0.
    let m1 = |tau: T| (ln_theta(d.first, Complex::new(c1, tau)) - Complex::new(c1, tau) * d.ln_x).re;
    let m2 = |tau: T| (ln_theta(d.second, Complex::new(c2, tau)) - Complex::new(c2, tau) * d.ln_y).re;
    let (mut t1, _) = truncation(m1, m1(T::zero()), what)?;
    let (mut t2, _) = truncation(m2, m2(T::zero()), what)?;
    if !d.joint_den.is_empty() {
        let diag = |tau: T| d.ln_f(Complex::new(c1, tau), Complex::new(c2, tau)).re;
        let anti = |tau: T| d.ln_f(Complex::new(c1, tau), Complex::new(c2, -tau)).re;
        let (a, _) = truncation(diag, ln_peak0, what)?;
        let (b, _) = truncation(anti, ln_peak0, what)?;
        t1 = t1.max(a).max(b);
        t2 = t2.max(a).max(b);
    }
    if let Some(h) = policy.half_length {
        t1 = h;
        t2 = h;
    }
    let ln_peak = ln_peak0;
    let dist1 = (c1 - l1).min(r1 - c1).min(slack);
    let dist2 = (c2 - l2).min(r2 - c2).min(slack);
    let n0 = T::from_usize_exact(policy.nodes);
    let mut h = [
        (dist1 * lit(0.5)).min(lit(0.5)).min(t1 * lit(2.0) / n0),
        (dist2 * lit(0.5)).min(lit(0.5)).min(t2 * lit(2.0) / n0),
    ];
    let half = [t1, t2];
    let count = |h: T, t: T| (t / h).ceil().to_usize().unwrap_or(usize::MAX);

    // Half-plane sum: conjugate symmetry F(s̄, t̄) = F(s, t)̄ folds τ₁ < 0 onto τ₁ > 0,
    // so the imaginary parts cancel exactly and only the real part is accumulated.
    // `raw` holds the weighted node sum of the current grid; halving one axis adds
    // only the new odd lines along that axis.
    let block = |js: &[usize], ks: &[i64], h1: T, h2: T| -> (T, T) {
        let second: Vec<(Complex<T>, Complex<T>)> = ks
            .iter()
            .map(|&k| {
                let t = Complex::new(c2, h2 * T::from_i64(k).unwrap());
                (t, ln_theta(d.second, t) - t * d.ln_y)
            })
            .collect();
        let mut acc = T::zero();
        let mut abs = T::zero();
        for &j in js {
            let s = Complex::new(c1, h1 * T::from_usize_exact(j));
            let a = ln_theta(d.first, s) - s * d.ln_x - ln_peak;
            let w = if j == 0 { T::one() } else { lit(2.0) };
            let mut row = T::zero();
            let mut row_abs = T::zero();
            for &(t, b) in &second {
                let v = (a + b + d.ln_joint(s, t)).exp();
                row = row + v.re;
                row_abs = row_abs + v.norm();
            }
            acc = acc + w * row;
            abs = abs + w * row_abs;
        }
        (acc, abs)
    };
    let too_many = |h: T, t: T| count(h, t).checked_mul(2).is_none_or(|n| n + 1 > policy.max_nodes);
    for i in 0..2 {
        if too_many(h[i], half[i]) {
            return Err(Error::Convergence {
                what: format!("{what}: pole-free strip on axis {} too narrow for the node budget", i + 1),
                last: f64::NAN,
                previous: f64::NAN,
            });
        }
    }
    let four_pi2 = (T::PI() + T::PI()) * (T::PI() + T::PI());
    let mut n = [count(h[0], t1), count(h[1], t2)];
    let all_j = |n1: usize| (0..=n1).collect::<Vec<_>>();
    let all_k = |n2: usize| (-(n2 as i64)..=(n2 as i64)).collect::<Vec<_>>();
    let (mut raw, mut raw_abs) = block(&all_j(n[0]), &all_k(n[1]), h[0], h[1]);
    let mut cur = raw * h[0] * h[1];
    let mut abs = raw_abs * h[0] * h[1];
    let mut axis_err = [T::infinity(), T::infinity()];
    let mut axis = 0usize;
    let mut rounds = 0usize;
    loop {
        let floor = abs * T::epsilon() * lit(1e3);
        let target = (policy.tolerance * cur.abs()).max(floor);
        if axis_err[0] <= target && axis_err[1] <= target {
            break;
        }
        if !policy.adaptive && rounds >= 2 {
            break;
        }
        // Refine the axis whose last halving moved the value most.
        if axis_err[0].is_finite() && axis_err[1].is_finite() {
            axis = if axis_err[0] >= axis_err[1] { 0 } else { 1 };
        }
        let hn = h[axis] * lit(0.5);
        if too_many(hn, half[axis]) {
            return Err(Error::Convergence {
                what: format!("{what}: axis {} refinement budget exhausted", axis + 1),
                last: scale_out(cur / four_pi2, ln_peak).to_f64_lossy(),
                previous: scale_out(axis_err[axis] / four_pi2, ln_peak).to_f64_lossy(),
            });
        }
        let n_old = n[axis];
        let n_new = count(hn, half[axis]);
        let (dv, da) = if axis == 0 {
            let js: Vec<usize> = (1..=n_new).filter(|j| j % 2 == 1 || *j > 2 * n_old).collect();
            block(&js, &all_k(n[1]), hn, h[1])
        } else {
            let ks: Vec<i64> = (-(n_new as i64)..=(n_new as i64))
                .filter(|k| k % 2 != 0 || k.unsigned_abs() as usize > 2 * n_old)
                .collect();
            block(&all_j(n[0]), &ks, h[0], hn)
        };
        raw = raw + dv;
        raw_abs = raw_abs + da;
        h[axis] = hn;
        n[axis] = n_new;
        let next = raw * h[0] * h[1];
        axis_err[axis] = (next - cur).abs();
        cur = next;
        abs = raw_abs * h[0] * h[1];
        rounds += 1;
        if !axis_err[1 - axis].is_finite() {
            axis = 1 - axis;
        }
    }
    let floor = abs * T::epsilon() * lit(1e3);
    Ok(MbValue2 {
        value: scale_out(cur / four_pi2, ln_peak),
        error: scale_out((axis_err[0] + axis_err[1]).max(floor) / four_pi2, ln_peak),
        abscissa: [c1, c2],
        half_length: half,
        step: h,
        nodes: [2 * n[0] + 1, 2 * n[1] + 1],
        axis_error: [scale_out(axis_err[0] / four_pi2, ln_peak), scale_out(axis_err[1] / four_pi2, ln_peak)],
    })
}

fn choose_abscissa2<T: Real>(d: &Double<'_, T>, s1: (T, T), s2: (T, T), what: &str) -> Result<(T, T)> {
    // Search box: finite strip sides plus the marginal saddles for open sides.
    let bounds = |terms: &[GammaTerm<T>], ln_z: T, (l, r): (T, T)| -> (T, T) {
        let m = if l.is_finite() && r.is_finite() { (r - l) * lit(1e-3) } else { lit(1e-3) };
        let c = minimize_on_interval(l + m, r - m, |c| objective(terms, ln_z, c));
        let lo = if l.is_finite() { l + m } else { c.min(r - m) - (r - c).max(T::one()) * lit(2.0) - lit(4.0) };
        let hi = if r.is_finite() { r - m } else { c.max(l + m) + (c - l).max(T::one()) * lit(2.0) + lit(4.0) };
        (lo, hi)
    };
    let (lo1, hi1) = bounds(d.first, d.ln_x, s1);
    let (lo2, hi2) = bounds(d.second, d.ln_y, s2);
    let n = 40usize;
    let mut best: Option<(T, T, T)> = None;
    let mut best_slack: Option<(T, T, T)> = None;
    for i in 0..=n {
        let c1 = lo1 + (hi1 - lo1) * T::from_usize_exact(i) / T::from_usize_exact(n);
        for j in 0..=n {
            let c2 = lo2 + (hi2 - lo2) * T::from_usize_exact(j) / T::from_usize_exact(n);
            let sl = d.slack(c1, c2);
            if !(sl > T::zero()) {
                continue;
            }
            if best_slack.is_none_or(|b| sl > b.0) {
                best_slack = Some((sl, c1, c2));
            }
            if sl < lit(1e-3) {
                continue;
            }
            let v = d.objective(c1, c2);
            if best.is_none_or(|b| v < b.0) {
                best = Some((v, c1, c2));
            }
        }
    }
    let (_, mut c1, mut c2) = match (best, best_slack) {
        (Some(b), _) => b,
        (None, Some((_, c1, c2))) => (T::zero(), c1, c2),
        (None, None) => {
            return Err(Error::Contour(format!(
                "{what}: joint gamma factors leave no admissible abscissa pair inside the kernel strips"
            )))
        }
    };
    // Coordinate-wise refinement inside the admissible region.
    let span1 = (hi1 - lo1) / T::from_usize_exact(n);
    let span2 = (hi2 - lo2) / T::from_usize_exact(n);
    let penalised = |a: T, b: T| -> T {
        if d.slack(a, b) < lit(1e-3) {
            T::infinity()
        } else {
            d.objective(a, b)
        }
    };
    for _ in 0..3 {
        let a = (c1 - span1).max(lo1);
        let b = (c1 + span1).min(hi1);
        let x = golden_min(a, b, |x| penalised(x, c2), 30);
        if penalised(x, c2) <= penalised(c1, c2) {
            c1 = x;
        }
        let a = (c2 - span2).max(lo2);
        let b = (c2 + span2).min(hi2);
        let y = golden_min(a, b, |y| penalised(c1, y), 30);
        if penalised(c1, y) <= penalised(c1, c2) {
            c2 = y;
        }
    }
    Ok((c1, c2))
}
