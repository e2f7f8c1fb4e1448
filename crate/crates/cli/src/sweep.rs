//! One-dimensional parameter sweeps. Points run concurrently; rows are emitted
//! in axis order, and a failing point yields error cells rather than aborting.

use std::io::Write;

use hybrid_secrecy::secrecy::MetricKind;
use rayon::prelude::*;
use serde_json::Value;

use crate::manifest::Manifest;
use crate::settings::{run_eval, EvalRow, Settings};
use crate::{fmt_num, CliError, CliResult};

/// Numeric config keys that may be swept.
pub const SWEEPABLE: [&str; 22] = [
    "alpha_r", "mu_r", "phi_r_db", "alpha_p", "mu_p", "phi_p_db", "alpha_e", "mu_e", "phi_e_db",
    "phi_e_rel_mu_s_db", "alpha_o", "beta_o", "g", "omega", "epsilon", "s", "phi_o_db", "blockage_p",
    "psi_q_db", "psi_t_db", "scenario", "target_rate",
];

/// Dotted paths into the in-memory configuration, mapped to config keys.
const ALIASES: [(&str, &str); 17] = [
    ("rf_sr.alpha", "alpha_r"),
    ("rf_sr.mu", "mu_r"),
    ("rf_sr.avg_snr_db", "phi_r_db"),
    ("rf_sp.alpha", "alpha_p"),
    ("rf_sp.mu", "mu_p"),
    ("rf_sp.avg_snr_db", "phi_p_db"),
    ("rf_se.alpha", "alpha_e"),
    ("rf_se.mu", "mu_e"),
    ("rf_se.avg_snr_db", "phi_e_db"),
    ("fso.alpha_o", "alpha_o"),
    ("fso.beta_o", "beta_o"),
    ("fso.epsilon", "epsilon"),
    ("fso.detection", "s"),
    ("fso.avg_snr_db", "phi_o_db"),
    ("fso.blockage_p", "blockage_p"),
    ("pc.psi_q_db", "psi_q_db"),
    ("pc.psi_t_db", "psi_t_db"),
];

/// Resolves a flat key or dotted path to a config key.
pub fn resolve_axis(axis: &str) -> CliResult<&'static str> {
    if let Some(k) = SWEEPABLE.iter().find(|k| **k == axis) {
        return Ok(k);
    }
    match axis {
        "fso.g" => return Ok("g"),
        "fso.omega" => return Ok("omega"),
        _ => {}
    }
    ALIASES
        .iter()
        .find(|(a, _)| *a == axis)
        .map(|(_, k)| *k)
        .ok_or_else(|| CliError::Usage(format!("axis {axis:?} does not name a scalar config field")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub metrics: Vec<MetricKind>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<&'static str> {
        if self.points < 2 {
            return Err(CliError::Usage(format!("--points {} must be at least 2", self.points)));
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Usage("sweep bounds must be finite".into()));
        }
        if self.metrics.is_empty() {
            return Err(CliError::Usage("--metrics must name at least one metric".into()));
        }
        resolve_axis(&self.axis)
    }

    /// Evenly spaced grid; the endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| if i == last { self.to } else { self.from + (self.to - self.from) * i as f64 / last as f64 })
            .collect()
    }
}

/// One sweep row: the axis value and, per metric, the result or the failure.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x: f64,
    pub cells: Vec<Result<EvalRow, String>>,
}

fn point_settings(base: &Settings, key: &str, x: f64) -> CliResult<Settings> {
    let mut s = base.clone();
    // The two ways of setting Φ_e are exclusive; the swept one wins.
    match key {
        "phi_e_db" => {
            s.raw.remove("phi_e_rel_mu_s_db");
        }
        "phi_e_rel_mu_s_db" => {
            s.raw.remove("phi_e_db");
        }
        _ => {}
    }
    let v = if x.fract() == 0.0 && x.abs() < 1e15 { Value::from(x as i64) } else { Value::from(x) };
    s.with_override(key, v)
}

pub fn run_sweep(base: &Settings, spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    let key = spec.validate()?;
    Ok(spec
        .grid()
        .into_par_iter()
        .map(|x| {
            let cells = match point_settings(base, key, x) {
                Ok(s) => spec
                    .metrics
                    .iter()
                    .map(|&m| run_eval(&s, m).map_err(|e| format!("{}: {e}", e.category())))
                    .collect(),
                Err(e) => vec![Err(format!("{}: {e}", e.category())); spec.metrics.len()],
            };
            SweepRow { x, cells }
        })
        .collect())
}

pub fn sweep_header(spec: &SweepSpec) -> Vec<String> {
    let mut h = vec![spec.axis.clone()];
    for m in &spec.metrics {
        let n = m.name();
        h.extend([
            n.to_string(),
            format!("{n}_route"),
            format!("{n}_evaluations"),
            format!("{n}_error_bound"),
            format!("{n}_error"),
        ]);
    }
    h
}

pub fn write_sweep(settings: &Settings, spec: &SweepSpec, rows: &[SweepRow], out: &mut impl Write) -> CliResult<()> {
    Manifest::new("sweep", settings, true).write_line(out)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(spec))?;
    for r in rows {
        let mut rec = vec![fmt_num(r.x)];
        for c in &r.cells {
            match c {
                Ok(e) => rec.extend([
                    fmt_num(e.value),
                    e.route.to_string(),
                    e.evaluations.to_string(),
                    fmt_num(e.error_bound),
                    String::new(),
                ]),
                Err(msg) => rec.extend([String::new(), String::new(), String::new(), String::new(), msg.clone()]),
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_resolution() {
        assert_eq!(resolve_axis("psi_q_db").unwrap(), "psi_q_db");
        assert_eq!(resolve_axis("pc.psi_q_db").unwrap(), "psi_q_db");
        assert_eq!(resolve_axis("fso.g").unwrap(), "g");
        assert!(resolve_axis("fso.colour").is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let s = SweepSpec { axis: "psi_q_db".into(), from: -10.0, to: 20.0, points: 16, metrics: vec![MetricKind::Spsc] };
        let g = s.grid();
        assert_eq!((g[0], g[15], g.len()), (-10.0, 20.0, 16));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let one = SweepSpec { points: 1, ..s };
        assert!(one.validate().is_err());
    }
}
