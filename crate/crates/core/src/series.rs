//! Compensated summation and truncated-series bookkeeping.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Neumaier-compensated running sum; exact to O(ε) independent of term count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum<T = f64> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Truncation controls for the infinite sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy<T = f64> {
    /// Relative size below which a term counts as negligible.
    pub tolerance: T,
    /// Cap on the number of terms of any one infinite sum.
    pub max_terms: usize,
    /// Neumaier compensation on (default) or naive accumulation.
    pub compensated: bool,
}

impl<T: Real> Default for SeriesPolicy<T> {
    fn default() -> Self {
        SeriesPolicy { tolerance: lit(1e-8), max_terms: 200, compensated: true }
    }
}

impl<T: Real> SeriesPolicy<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero() && self.tolerance < T::one()) {
            return Err(Error::param("tolerance", format!("{} must lie in (0, 1)", self.tolerance)));
        }
        if self.max_terms < 10 {
            return Err(Error::param("max_terms", format!("{} must be at least 10", self.max_terms)));
        }
        Ok(())
    }

    /// Sums `term(0), term(1), …` until three consecutive terms are below
    /// `tolerance · |partial|`.
    pub fn sum(&self, what: &str, mut term: impl FnMut(usize) -> T) -> Result<SeriesValue<T>> {
        self.validate()?;
        let mut acc = CompensatedSum::new();
        let mut naive = T::zero();
        let mut small = 0;
        let mut last = T::zero();
        for n in 0..self.max_terms {
            let t = term(n);
            if !t.is_finite() {
                return Err(Error::Series {
                    what: what.to_string(),
                    partial: self.pick(&acc, naive).to_f64_lossy(),
                    bound: f64::INFINITY,
                    terms: n,
                });
            }
            acc.add(t);
            naive = naive + t;
            last = t.abs();
            let partial = self.pick(&acc, naive);
            if last <= self.tolerance * partial.abs() {
                small += 1;
                if small == 3 {
                    return Ok(SeriesValue { value: partial, terms: n + 1, bound: last });
                }
            } else {
                small = 0;
            }
        }
        Err(Error::Series {
            what: what.to_string(),
            partial: self.pick(&acc, naive).to_f64_lossy(),
            bound: last.to_f64_lossy(),
            terms: self.max_terms,
        })
    }

    fn pick(&self, acc: &CompensatedSum<T>, naive: T) -> T {
        if self.compensated {
            acc.value()
        } else {
            naive
        }
    }
}

/// A truncated series with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T = f64> {
    pub value: T,
    pub terms: usize,
    /// Magnitude of the last retained term.
    pub bound: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let s: CompensatedSum<f64> = xs.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn alternating_binomial_series() {
        // Σ C(n+2, n) (−x)^n = (1 + x)^{−3}
        let x = 0.6_f64;
        let sp = SeriesPolicy::default();
        let r = sp
            .sum("test", |n| {
                let n = n as f64;
                (n + 1.0) * (n + 2.0) / 2.0 * (-x).powf(n)
            })
            .unwrap();
        assert!((r.value - 1.6f64.powi(-3)).abs() < 1e-9);
    }

    #[test]
    fn divergence_is_reported() {
        let sp = SeriesPolicy::default();
        match sp.sum("geom", |n| 1.5_f64.powi(n as i32)) {
            Err(Error::Series { terms, bound, .. }) => {
                assert_eq!(terms, 200);
                assert!(bound > 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(SeriesPolicy { tolerance: 0.0, ..SeriesPolicy::default() }.validate().is_err());
    }
}
