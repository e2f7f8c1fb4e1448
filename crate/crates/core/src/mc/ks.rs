//! Kolmogorov–Smirnov distance between an empirical sample and an analytic CDF.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Bounds on `sup_x |F_n(x) − F(x)|` from evaluating `F` at finitely many points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsBound {
    /// Maximum deviation observed at the evaluation points; a lower bound.
    pub lower: f64,
    /// Rigorous upper bound using monotonicity of both functions between points.
    pub upper: f64,
    pub n: usize,
    /// Number of analytic CDF evaluations.
    pub evaluations: usize,
}

/// Initial number of quantile intervals before refinement.
const COARSE: usize = 256;

/// KS distance of `samples` against `cdf`, which must be nondecreasing.
///
/// `F` is evaluated at empirical quantiles. Between consecutive evaluation
/// points `a < b` both functions are monotone, so
/// `|F_n − F| ≤ max(F_n(b⁻) − F(a), F(b) − F_n(a))`. Intervals whose bound
/// exceeds the observed maximum by more than `resolution` are split at their
/// median sample until `upper ≤ lower + resolution` or no interval can split.
pub fn ks_distance(samples: &[f64], resolution: f64, cdf: impl Fn(f64) -> Result<f64> + Sync) -> Result<KsBound> {
    if samples.is_empty() || !(resolution > 0.0) {
        return Err(Error::param("ks_distance", "need samples and a positive resolution"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    let nf = n as f64;
    // Empirical F_n(x) = #{≤ x}/n and F_n(x⁻) = #{< x}/n.
    let le = |x: f64| xs.partition_point(|&v| v <= x) as f64 / nf;
    let lt = |x: f64| xs.partition_point(|&v| v < x) as f64 / nf;
    let eval = |idx: &[usize]| -> Result<Vec<f64>> { idx.par_iter().map(|&i| cdf(xs[i])).collect() };

    let mut idx: Vec<usize> = (0..=COARSE).map(|k| ((n - 1) * k) / COARSE).collect();
    idx.dedup_by_key(|i| xs[*i].to_bits());
    let f = eval(&idx)?;
    let mut evaluations = idx.len();
    let mut lower: f64 = 0.0;
    for (k, &i) in idx.iter().enumerate() {
        lower = lower.max((le(xs[i]) - f[k]).abs());
    }
    // Open intervals (index, F) pairs awaiting a verdict.
    let mut open: Vec<((usize, f64), (usize, f64))> =
        (0..idx.len().saturating_sub(1)).map(|k| ((idx[k], f[k]), (idx[k + 1], f[k + 1]))).collect();
    let mut closed: f64 = 0.0;
    let local = |(a, fa): (usize, f64), (b, fb): (usize, f64)| (lt(xs[b]) - fa).max(fb - le(xs[a]));
    loop {
        let mut split = Vec::new();
        let mut mids = Vec::new();
        for &(a, b) in &open {
            let bound = local(a, b);
            if bound <= lower + resolution {
                closed = closed.max(bound);
                continue;
            }
            // A distinct sample strictly inside (x_a, x_b) is needed to split.
            let lo = xs.partition_point(|&v| v <= xs[a.0]);
            let hi = xs.partition_point(|&v| v < xs[b.0]);
            if lo >= hi {
                closed = closed.max(bound);
                continue;
            }
            mids.push(lo + (hi - lo) / 2);
            split.push((a, b));
        }
        if split.is_empty() {
            break;
        }
        let fm = eval(&mids)?;
        evaluations += mids.len();
        open.clear();
        for ((a, b), (m, fv)) in split.into_iter().zip(mids.into_iter().zip(fm)) {
            lower = lower.max((le(xs[m]) - fv).abs());
            open.push((a, (m, fv)));
            open.push(((m, fv), b));
        }
    }
    let mut upper = lower.max(closed);
    // Below the smallest sample F_n = 0 and F ≤ F(x₀); SNR laws vanish below 0,
    // so a minimum at 0 (blockage atom) leaves nothing to the left.
    if xs[0] > 0.0 {
        upper = upper.max(f[0]);
    }
    upper = upper.max(1.0 - f[f.len() - 1]);
    Ok(KsBound { lower, upper, n, evaluations })
}
