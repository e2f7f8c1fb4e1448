//! Analytic-versus-Monte-Carlo validation reports.
//!
//! A report holds one z-score row per metric and one Kolmogorov–Smirnov row per
//! distribution function. Metric rows use the standard error at the analytic
//! value. A report passes iff every `|z| ≤ 3` and every KS upper bound is
//! below `2/√n`. Reports carry no timestamp, so reruns with the same
//! config, sample count and seed are byte-identical.

use std::io::Write;

use hybrid_secrecy::channels::{alpha_mu_cdf, fso_blocked_cdf_with};
use hybrid_secrecy::cun::{cdf_hybrid_with, cdf_rf_with};
use hybrid_secrecy::mc::{
    estimate_for, ks_distance, null_std_error, sample_batch, simulate_metrics_with, MIN_SAMPLES,
};
use hybrid_secrecy::secrecy::{evaluate, MetricKind};

use crate::manifest::Manifest;
use crate::settings::Settings;
use crate::{fmt_num, CliError, CliResult};

/// Acceptance band on metric z-scores.
pub const Z_LIMIT: f64 = 3.0;
/// Gap allowed between the rigorous KS upper bound and the observed maximum.
pub const KS_RESOLUTION: f64 = 1e-4;

pub const REPORT_HEADER: [&str; 7] = ["check", "analytic", "estimate", "std_error", "statistic", "limit", "status"];

#[derive(Debug, Clone, PartialEq)]
pub enum CheckKind {
    /// `statistic` is the z-score of the analytic value against the MC estimate.
    Metric { analytic: f64, estimate: f64, std_error: f64 },
    /// `statistic` is an upper bound on the KS distance.
    Distribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub statistic: f64,
    pub limit: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.kind {
            CheckKind::Metric { .. } => self.statistic.abs() <= self.limit,
            CheckKind::Distribution => self.statistic < self.limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateReport {
    pub manifest: Manifest,
    pub checks: Vec<Check>,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write(&self, out: &mut impl Write) -> CliResult<()> {
        self.manifest.write_line(out)?;
        {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(REPORT_HEADER)?;
            for c in &self.checks {
                let (a, e, s) = match c.kind {
                    CheckKind::Metric { analytic, estimate, std_error } => {
                        (fmt_num(analytic), fmt_num(estimate), fmt_num(std_error))
                    }
                    CheckKind::Distribution => (String::new(), String::new(), String::new()),
                };
                let status = if c.passed() { "PASS" } else { "FAIL" };
                w.write_record([c.name.clone(), a, e, s, fmt_num(c.statistic), fmt_num(c.limit), status.into()])?;
            }
            w.flush()?;
        }
        if self.passed() {
            writeln!(out, "# result: PASS")?;
        } else {
            writeln!(out, "# result: FAIL ({})", self.failures().join(", "))?;
        }
        Ok(())
    }
}

/// Validates the analytic metrics of `analytic` against Monte-Carlo runs of
/// `mc`. The two are normally the same settings; passing different ones
/// injects a model fault.
pub fn run_validate(analytic: &Settings, mc: &Settings, n: usize, seed: u64) -> CliResult<ValidateReport> {
    if n < MIN_SAMPLES {
        return Err(CliError::Usage(format!(
            "--samples {n} is below {MIN_SAMPLES}; the standard error would exceed 0.005"
        )));
    }
    let a = &analytic.loaded.secrecy;
    let m = &mc.loaded.secrecy;
    let (sp, policy) = (&analytic.series, &analytic.contour);
    let model = mc.loaded.eavesdropper;
    let est = simulate_metrics_with(m, n, seed, model)?;
    let mut checks = Vec::new();
    for kind in [MetricKind::SopLower, MetricKind::Spsc, MetricKind::Est] {
        let r = evaluate(a, kind, sp, policy)?;
        let e = estimate_for(kind, m, &est);
        let se = null_std_error(kind, m, r.value, n);
        checks.push(Check {
            name: kind.name().to_string(),
            kind: CheckKind::Metric { analytic: r.value, estimate: e.estimate, std_error: se },
            statistic: e.score_z(r.value, se),
            limit: Z_LIMIT,
        });
    }
    let batch = sample_batch(m, n, seed, model)?;
    let ks_limit = 2.0 / (n as f64).sqrt();
    let mut ks = |name: &str, xs: &[f64], cdf: &(dyn Fn(f64) -> hybrid_secrecy::Result<f64> + Sync)| -> CliResult<()> {
        let b = ks_distance(xs, KS_RESOLUTION, cdf)?;
        checks.push(Check { name: name.to_string(), kind: CheckKind::Distribution, statistic: b.upper, limit: ks_limit });
        Ok(())
    };
    ks("ks_rf_sr", &batch.gamma_r, &|x| alpha_mu_cdf(&a.rf_sr, x))?;
    ks("ks_rf_sp", &batch.gamma_p, &|x| alpha_mu_cdf(&a.rf_sp, x))?;
    ks("ks_rf_se", &batch.x_e, &|x| alpha_mu_cdf(&a.rf_se, x))?;
    ks("ks_fso", &batch.gamma_o, &|x| fso_blocked_cdf_with(&a.fso, x, policy))?;
    ks("ks_rf_relay", &batch.gamma_rf, &|x| cdf_rf_with(a, x, sp, policy))?;
    let combined: Vec<f64> = batch.gamma_rf.iter().zip(&batch.gamma_o).map(|(r, o)| r.max(*o)).collect();
    ks("ks_hybrid", &combined, &|x| cdf_hybrid_with(a, x, sp, policy))?;
    let manifest = Manifest::new("validate", analytic, false).with_run(seed, n);
    Ok(ValidateReport { manifest, checks })
}
