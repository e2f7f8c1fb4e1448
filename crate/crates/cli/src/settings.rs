//! Effective run settings: the parsed config (after `--set` overrides) and the
//! numerical policies, plus single-metric evaluation.

use std::io::Write;
use std::path::Path;

use hybrid_secrecy::config::{from_value, read_config_value, LoadedConfig};
use hybrid_secrecy::secrecy::{evaluate, MetricKind, Route};
use hybrid_secrecy::series::SeriesPolicy;
use hybrid_secrecy::specfun::ContourPolicy;
use serde_json::{Map, Value};

use crate::manifest::Manifest;
use crate::{fmt_num, CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Settings {
    /// Config object as evaluated, overrides applied.
    pub raw: Map<String, Value>,
    pub loaded: LoadedConfig,
    pub series: SeriesPolicy<f64>,
    pub contour: ContourPolicy<f64>,
}

/// Applies one `KEY=VALUE` override. The value is read as JSON when it parses
/// (numbers, `null` to delete), else as a string.
pub fn apply_override(map: &mut Map<String, Value>, spec: &str) -> CliResult<()> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("override {spec:?} must have the form KEY=VALUE")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(CliError::Usage(format!("override {spec:?} has an empty key")));
    }
    match serde_json::from_str::<Value>(value.trim()) {
        Ok(Value::Null) => {
            map.remove(key);
        }
        Ok(v) => {
            map.insert(key.to_string(), v);
        }
        Err(_) => {
            map.insert(key.to_string(), Value::String(value.trim().to_string()));
        }
    }
    Ok(())
}

impl Settings {
    pub fn from_map(raw: Map<String, Value>, tolerance: Option<f64>) -> CliResult<Self> {
        let loaded = from_value(&raw)?;
        let mut series = SeriesPolicy::<f64>::default();
        let mut contour = ContourPolicy::<f64>::default();
        if let Some(t) = tolerance {
            if !(t > 0.0 && t < 1e-2) {
                return Err(CliError::Usage(format!("--tolerance {t} must lie in (0, 1e-2)")));
            }
            series.tolerance = t;
            contour.tolerance = t.max(100.0 * f64::EPSILON);
        }
        Ok(Settings { raw, loaded, series, contour })
    }

    /// Returns a copy with one more override applied and re-validated.
    pub fn with_override(&self, key: &str, value: Value) -> CliResult<Self> {
        let mut raw = self.raw.clone();
        raw.insert(key.to_string(), value);
        let loaded = from_value(&raw)?;
        Ok(Settings { raw, loaded, ..self.clone() })
    }
}

/// Reads a config file, applies overrides in order and validates the result.
pub fn load_settings(path: &Path, overrides: &[String], tolerance: Option<f64>) -> CliResult<Settings> {
    let mut raw = read_config_value(path)?;
    for o in overrides {
        apply_override(&mut raw, o)?;
    }
    Settings::from_map(raw, tolerance)
}

pub fn parse_metric(name: &str) -> CliResult<MetricKind> {
    match name.trim().to_ascii_lowercase().as_str() {
        "sop" | "sop_l" => Ok(MetricKind::SopLower),
        "spsc" => Ok(MetricKind::Spsc),
        "est" => Ok(MetricKind::Est),
        other => Err(CliError::Usage(format!("unknown metric {other:?}; expected sop, spsc or est"))),
    }
}

pub fn route_name(r: Route) -> &'static str {
    match r {
        Route::ClosedForm => "closed-form",
        Route::Quadrature => "quadrature",
    }
}

/// One evaluated metric with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub metric: MetricKind,
    pub scenario: u8,
    pub value: f64,
    pub route: &'static str,
    pub evaluations: usize,
    pub error_bound: f64,
    pub clamped: bool,
}

pub const EVAL_HEADER: [&str; 7] = ["metric", "scenario", "value", "route", "evaluations", "error_bound", "clamped"];

pub fn run_eval(settings: &Settings, metric: MetricKind) -> CliResult<EvalRow> {
    let r = evaluate(&settings.loaded.secrecy, metric, &settings.series, &settings.contour)?;
    Ok(EvalRow {
        metric,
        scenario: r.scenario.number(),
        value: r.value,
        route: route_name(r.route),
        evaluations: r.evaluations,
        error_bound: r.error_bound,
        clamped: r.clamped,
    })
}

pub fn write_eval(settings: &Settings, row: &EvalRow, out: &mut impl Write) -> CliResult<()> {
    Manifest::new("eval", settings, true).write_line(out)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EVAL_HEADER)?;
    w.write_record([
        row.metric.name().to_string(),
        row.scenario.to_string(),
        fmt_num(row.value),
        row.route.to_string(),
        row.evaluations.to_string(),
        fmt_num(row.error_bound),
        row.clamped.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse_json_or_string() {
        let mut m = Map::new();
        apply_override(&mut m, "psi_q_db=5").unwrap();
        apply_override(&mut m, "eavesdropper_model=shared-transmit-power").unwrap();
        assert_eq!(m["psi_q_db"], Value::from(5));
        assert_eq!(m["eavesdropper_model"], Value::from("shared-transmit-power"));
        apply_override(&mut m, "psi_q_db=null").unwrap();
        assert!(!m.contains_key("psi_q_db"));
        assert!(apply_override(&mut m, "novalue").is_err());
    }

    #[test]
    fn metric_names() {
        assert_eq!(parse_metric("SOP").unwrap(), MetricKind::SopLower);
        assert_eq!(parse_metric("est").unwrap(), MetricKind::Est);
        assert!(parse_metric("ber").is_err());
    }
}
