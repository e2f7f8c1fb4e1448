//! Flat JSON scenario files.
//!
//! Averages in dB carry a `_db` suffix; shape parameters are plain numbers.
//! Unknown keys are rejected. Defaults: `blockage_p = 0`, `s = 1`,
//! `scenario = 1`, `eavesdropper_model = "independent"`.
//!
//! `phi_e_rel_mu_s_db` sets Φ_e relative to the FSO electrical SNR μ_s (in dB)
//! and is exclusive with `phi_e_db`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::channels::{electrical_snr, linear_to_db, Detection, FsoLinkParams, RfChannelParams};
use crate::cun::{PowerConstraints, Scenario};
use crate::mc::EavesdropperModel;
use crate::secrecy::SecrecyConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field} {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.into() }
}

/// On-disk representation, one key per scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha_r: f64,
    pub mu_r: f64,
    pub phi_r_db: f64,
    pub alpha_p: f64,
    pub mu_p: f64,
    pub phi_p_db: f64,
    pub alpha_e: f64,
    pub mu_e: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_e_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_e_rel_mu_s_db: Option<f64>,
    pub alpha_o: f64,
    pub beta_o: f64,
    pub g: f64,
    pub omega: f64,
    pub epsilon: f64,
    #[serde(default = "one")]
    pub s: f64,
    pub phi_o_db: f64,
    #[serde(default)]
    pub blockage_p: f64,
    pub psi_q_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_t_db: Option<f64>,
    #[serde(default = "one")]
    pub scenario: f64,
    pub target_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eavesdropper_model: Option<String>,
}

fn one() -> f64 {
    1.0
}

/// A validated scenario together with the MC eavesdropper model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedConfig {
    pub secrecy: SecrecyConfig,
    pub eavesdropper: EavesdropperModel,
}

fn positive_integer(field: &str, v: f64) -> Result<u32, ConfigError> {
    if v.fract() != 0.0 || !(1.0..=1e6).contains(&v) {
        return Err(invalid(field, format!("must be a positive integer (got {v})")));
    }
    Ok(v as u32)
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(field, format!("must be positive and finite (got {v})")));
    }
    Ok(v)
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if !v.is_finite() {
        return Err(invalid(field, format!("must be finite (got {v})")));
    }
    Ok(v)
}

impl ConfigFile {
    pub fn validate(&self) -> Result<LoadedConfig, ConfigError> {
        let rf = |a: &str, alpha: f64, m: &str, mu: f64, p: &str, phi: f64| -> Result<RfChannelParams, ConfigError> {
            Ok(RfChannelParams { alpha: positive(a, alpha)?, mu: positive_integer(m, mu)?, avg_snr_db: finite(p, phi)? })
        };
        let rf_sr = rf("alpha_r", self.alpha_r, "mu_r", self.mu_r, "phi_r_db", self.phi_r_db)?;
        let rf_sp = rf("alpha_p", self.alpha_p, "mu_p", self.mu_p, "phi_p_db", self.phi_p_db)?;
        let s = positive_integer("s", self.s)?;
        let detection = Detection::from_order(s).map_err(|_| invalid("s", format!("must be 1 or 2 (got {s})")))?;
        if !(0.0..=1.0).contains(&self.blockage_p) {
            return Err(invalid("blockage_p", format!("must lie in [0, 1] (got {})", self.blockage_p)));
        }
        let fso = FsoLinkParams {
            alpha_o: positive("alpha_o", self.alpha_o)?,
            beta_o: positive_integer("beta_o", self.beta_o)?,
            g: positive("g", self.g)?,
            omega: positive("omega", self.omega)?,
            epsilon: positive("epsilon", self.epsilon)?,
            detection,
            avg_snr_db: finite("phi_o_db", self.phi_o_db)?,
            blockage_p: self.blockage_p,
        };
        fso.validate().map_err(|e| invalid("fso", e.to_string()))?;
        let phi_e_db = match (self.phi_e_db, self.phi_e_rel_mu_s_db) {
            (Some(v), None) => finite("phi_e_db", v)?,
            (None, Some(rel)) => {
                let mu_s = electrical_snr(&fso).map_err(|e| invalid("fso", e.to_string()))?;
                linear_to_db(mu_s) + finite("phi_e_rel_mu_s_db", rel)?
            }
            (Some(_), Some(_)) => return Err(invalid("phi_e_db", "conflicts with phi_e_rel_mu_s_db; give one")),
            (None, None) => return Err(invalid("phi_e_db", "is required (or phi_e_rel_mu_s_db)")),
        };
        let rf_se = rf("alpha_e", self.alpha_e, "mu_e", self.mu_e, "phi_e_db", phi_e_db)?;
        let scenario_n = positive_integer("scenario", self.scenario)?;
        let scenario = Scenario::from_number(scenario_n.min(255) as u8)
            .map_err(|_| invalid("scenario", format!("must be 1 or 2 (got {scenario_n})")))?;
        let psi_q_db = finite("psi_q_db", self.psi_q_db)?;
        let psi_t_db = self.psi_t_db.map(|v| finite("psi_t_db", v)).transpose()?;
        if scenario == Scenario::DoubleConstraint && psi_t_db.is_none() {
            return Err(invalid("psi_t_db", "is required for scenario 2"));
        }
        let pc = PowerConstraints { psi_q_db, psi_t_db, scenario };
        if !(self.target_rate >= 0.0) || !self.target_rate.is_finite() {
            return Err(invalid("target_rate", format!("must be finite and non-negative (got {})", self.target_rate)));
        }
        let eavesdropper = match self.eavesdropper_model.as_deref() {
            None | Some("independent") => EavesdropperModel::Independent,
            Some("shared-transmit-power") => EavesdropperModel::SharedTransmitPower,
            Some(other) => {
                return Err(invalid(
                    "eavesdropper_model",
                    format!("must be \"independent\" or \"shared-transmit-power\" (got {other:?})"),
                ))
            }
        };
        let secrecy = SecrecyConfig { rf_sr, rf_sp, rf_se, fso, pc, target_rate: self.target_rate };
        secrecy.validate().map_err(|e| invalid("config", e.to_string()))?;
        Ok(LoadedConfig { secrecy, eavesdropper })
    }
}

fn parse_error(e: serde_json::Error) -> ConfigError {
    ConfigError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses JSON text into an object, keeping line/column on failure.
pub fn parse_value(text: &str) -> Result<Map<String, Value>, ConfigError> {
    match serde_json::from_str::<Value>(text).map_err(parse_error)? {
        Value::Object(m) => Ok(m),
        _ => Err(ConfigError::Parse { line: 1, column: 1, message: "top level must be a JSON object".into() }),
    }
}

/// Validates an object of config keys.
pub fn from_value(map: &Map<String, Value>) -> Result<LoadedConfig, ConfigError> {
    let file: ConfigFile = serde_json::from_value(Value::Object(map.clone())).map_err(|e| {
        let msg = e.to_string();
        match msg.strip_prefix("unknown field ") {
            Some(rest) => invalid("config", format!("has unknown field {rest}")),
            None => invalid("config", msg),
        }
    })?;
    file.validate()
}

/// Parses and validates JSON text.
pub fn parse_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    let map = parse_value(text)?;
    // Re-parse with the typed schema so type errors carry a position.
    serde_json::from_str::<ConfigFile>(text).map_err(|e| {
        if e.is_data() {
            let msg = e.to_string();
            match msg.strip_prefix("unknown field ") {
                Some(rest) => invalid("config", format!("has unknown field {rest}")),
                None => parse_error(e),
            }
        } else {
            parse_error(e)
        }
    })?;
    from_value(&map)
}

pub fn read_config_value(path: &Path) -> Result<Map<String, Value>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_value(&text)
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}
