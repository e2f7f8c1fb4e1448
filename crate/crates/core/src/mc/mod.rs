//! Monte-Carlo ground truth for every analytic quantity.
//!
//! Draws come from ChaCha20 substreams addressed by `(seed, component, block)`,
//! so results are bit-identical for any worker count: blocks are generated
//! independently and reduced in block order.

mod ks;

pub use ks::{ks_distance, KsBound};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Normal};
use rayon::prelude::*;

use crate::channels::{electrical_snr, FsoLinkParams, RfChannelParams};
use crate::cun::Scenario;
use crate::error::{Error, Result};
use crate::secrecy::{MetricKind, SecrecyConfig};

/// Draws per substream block.
pub const BLOCK: usize = 1 << 16;

/// Smallest sample count for which every probability estimate has a standard
/// error of at most 0.005.
pub const MIN_SAMPLES: usize = 10_000;

/// Substream component identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Component {
    SourceRelay = 0,
    SourcePrimary = 1,
    SourceEavesdropper = 2,
    Fso = 3,
    Blockage = 4,
}

fn stream(seed: u64, component: Component, block: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(((component as u64) << 40) | block as u64);
    rng
}

fn blocks(n: usize) -> impl IndexedParallelIterator<Item = (usize, usize)> {
    let count = n.div_ceil(BLOCK);
    (0..count).into_par_iter().map(move |b| (b, BLOCK.min(n - b * BLOCK)))
}

fn alpha_mu_block(ch: &RfChannelParams, rng: &mut ChaCha20Rng, len: usize, out: &mut Vec<f64>) -> Result<()> {
    let g = Gamma::new(ch.mu as f64, 1.0).map_err(|e| Error::param("mu", e.to_string()))?;
    let (delta, inv) = (ch.delta(), 1.0 / ch.a_tilde());
    out.extend((0..len).map(|_| (g.sample(rng) / delta).powf(inv)));
    Ok(())
}

/// Irradiance model: `I = X · Y · P` with `X ~ Gamma(α_o, 1/α_o)`,
/// `Y = |A e^{jθ} + Z|²`, `A² ~ Gamma(β_o, Ω/β_o)`, `Z ~ CN(0, g)`, and the
/// pointing loss `P = U^{1/ε²}` (density `ε² p^{ε²−1}` on [0, 1]).
/// `E[I] = (g + Ω) ε²/(ε² + 1)`.
struct MalagaSampler {
    x: Gamma<f64>,
    a2: Gamma<f64>,
    z: Normal<f64>,
    inv_eps2: f64,
    mean_i: f64,
    mu_s: f64,
    s: i32,
}

impl MalagaSampler {
    fn new(fso: &FsoLinkParams) -> Result<Self> {
        fso.validate()?;
        let e2 = fso.epsilon * fso.epsilon;
        Ok(MalagaSampler {
            x: Gamma::new(fso.alpha_o, 1.0 / fso.alpha_o).map_err(|e| Error::param("alpha_o", e.to_string()))?,
            a2: Gamma::new(fso.beta_o as f64, fso.omega / fso.beta_o as f64)
                .map_err(|e| Error::param("beta_o", e.to_string()))?,
            z: Normal::new(0.0, (fso.g / 2.0).sqrt()).map_err(|e| Error::param("g", e.to_string()))?,
            inv_eps2: 1.0 / e2,
            mean_i: (fso.g + fso.omega) * e2 / (e2 + 1.0),
            mu_s: electrical_snr(fso)?,
            s: fso.s() as i32,
        })
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        let x = self.x.sample(rng);
        let a = self.a2.sample(rng).sqrt();
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let re = a * theta.cos() + self.z.sample(rng);
        let im = a * theta.sin() + self.z.sample(rng);
        let p = rng.random::<f64>().powf(self.inv_eps2);
        self.mu_s * (x * (re * re + im * im) * p / self.mean_i).powi(self.s)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "need at least one sample"));
    }
    Ok(())
}

/// α-μ SNR draws `γ = (G/δ)^{1/α̃}`, `G ~ Gamma(μ, 1)`.
pub fn sample_alpha_mu(ch: &RfChannelParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    sample_alpha_mu_in(ch, n, seed, Component::SourceRelay)
}

fn sample_alpha_mu_in(ch: &RfChannelParams, n: usize, seed: u64, c: Component) -> Result<Vec<f64>> {
    ch.validate()?;
    check_n(n)?;
    let parts: Vec<Result<Vec<f64>>> = blocks(n)
        .map(|(b, len)| {
            let mut out = Vec::with_capacity(len);
            alpha_mu_block(ch, &mut stream(seed, c, b), len, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Unblocked Málaga electrical SNR draws.
pub fn sample_malaga_snr(fso: &FsoLinkParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    check_n(n)?;
    let sampler = MalagaSampler::new(fso)?;
    let parts: Vec<Vec<f64>> = blocks(n)
        .map(|(b, len)| {
            let mut rng = stream(seed, Component::Fso, b);
            (0..len).map(|_| sampler.draw(&mut rng)).collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Zeroes each sample independently with probability `p_o`.
pub fn apply_blockage(samples: &[f64], p_o: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p_o) {
        return Err(Error::param("blockage_p", format!("{p_o} must lie in [0, 1]")));
    }
    let parts: Vec<Vec<f64>> = blocks(samples.len())
        .map(|(b, len)| {
            let mut rng = stream(seed, Component::Blockage, b);
            samples[b * BLOCK..b * BLOCK + len]
                .iter()
                .map(|&x| if rng.random::<f64>() < p_o { 0.0 } else { x })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// How the eavesdropper SNR relates to the secondary transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EavesdropperModel {
    /// `γ_e` is an α-μ draw with average Φ_e, independent of the S–P link.
    /// This is the law the analytic bound integrates against.
    #[default]
    Independent,
    /// `γ_e` scales with the same transmit power as `γ_r`: `P γ̃_e` with
    /// `P = Ψ_Q/X_p` (Scenario I) or `min(Ψ_Q/X_p, Ψ_T)` (Scenario II) and the
    /// S–P draw shared between the two links.
    SharedTransmitPower,
}

/// Estimated probability or throughput with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    fn probability(count: u64, n: usize, seed: u64) -> Self {
        let p = count as f64 / n as f64;
        McEstimate { estimate: p, std_error: (p * (1.0 - p) / n as f64).sqrt(), n, seed }
    }

    /// `(analytic − estimate)/σ̂`; a zero standard error with exact agreement is 0.
    pub fn z_score(&self, analytic: f64) -> f64 {
        let d = analytic - self.estimate;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }

    /// Score statistic `(analytic − estimate)/σ₀` with `σ₀` taken under the
    /// analytic value; it stays finite when no events are observed. Falls back to
    /// [`McEstimate::z_score`] when `σ₀ = 0`.
    pub fn score_z(&self, analytic: f64, null_std_error: f64) -> f64 {
        if null_std_error > 0.0 {
            (analytic - self.estimate) / null_std_error
        } else {
            self.z_score(analytic)
        }
    }
}

/// Binomial standard error of the estimator paired with `kind` by
/// [`estimate_for`], evaluated at the analytic value.
pub fn null_std_error(kind: MetricKind, cfg: &SecrecyConfig, analytic: f64, n: usize) -> f64 {
    let (p, scale) = match kind {
        MetricKind::SopLower | MetricKind::Spsc => (analytic, 1.0),
        MetricKind::Est if cfg.target_rate > 0.0 => (1.0 - analytic / cfg.target_rate, cfg.target_rate),
        MetricKind::Est => return 0.0,
    };
    let p = p.clamp(0.0, 1.0);
    scale * (p * (1.0 - p) / n as f64).sqrt()
}

/// Per-draw SNRs of one simulated batch.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub gamma_p: Vec<f64>,
    pub gamma_r: Vec<f64>,
    pub gamma_e: Vec<f64>,
    /// S–E α-μ draw before any transmit-power scaling.
    pub x_e: Vec<f64>,
    /// FSO SNR including blockage zeros.
    pub gamma_o: Vec<f64>,
    /// RF SNR at R after the power constraint.
    pub gamma_rf: Vec<f64>,
    pub seed: u64,
    pub n: usize,
}

#[derive(Default, Clone, Copy)]
struct Counts {
    sop: u64,
    sop_l: u64,
    nonpositive: u64,
}

fn scenario_power(cfg: &SecrecyConfig, scenario: Scenario, x_p: f64) -> Result<f64> {
    let q = cfg.pc.psi_q() / x_p;
    Ok(match scenario {
        Scenario::Interference => q,
        Scenario::DoubleConstraint => q.min(cfg.pc.psi_t()?),
    })
}

/// Generates the per-draw SNRs for `cfg`.
pub fn sample_batch(cfg: &SecrecyConfig, n: usize, seed: u64, model: EavesdropperModel) -> Result<SampleBatch> {
    cfg.validate()?;
    check_n(n)?;
    let x_r = sample_alpha_mu_in(&cfg.rf_sr, n, seed, Component::SourceRelay)?;
    let x_p = sample_alpha_mu_in(&cfg.rf_sp, n, seed, Component::SourcePrimary)?;
    let x_e = sample_alpha_mu_in(&cfg.rf_se, n, seed, Component::SourceEavesdropper)?;
    let gamma_o = if cfg.fso.blockage_p == 1.0 {
        vec![0.0; n]
    } else {
        apply_blockage(&sample_malaga_snr(&cfg.fso, n, seed)?, cfg.fso.blockage_p, seed)?
    };
    let mut gamma_rf = Vec::with_capacity(n);
    let mut gamma_e = Vec::with_capacity(n);
    for i in 0..n {
        let p = scenario_power(cfg, cfg.pc.scenario, x_p[i])?;
        gamma_rf.push(p * x_r[i]);
        gamma_e.push(match model {
            EavesdropperModel::Independent => x_e[i],
            EavesdropperModel::SharedTransmitPower => p * x_e[i],
        });
    }
    Ok(SampleBatch { gamma_p: x_p, gamma_r: x_r, gamma_e, x_e, gamma_o, gamma_rf, seed, n })
}

/// Estimates SOP, SOP_L, SPSC and EST for the scenario in `cfg.pc`.
///
/// SOP counts `γ_f ≤ σγ_e + σ − 1`, SOP_L counts `γ_f ≤ σγ_e`, SPSC is one minus
/// the fraction with `γ_f ≤ γ_e`, and EST is `Υ_e (1 − SOP)`.
pub fn simulate_metrics(cfg: &SecrecyConfig, n: usize, seed: u64) -> Result<BTreeMap<&'static str, McEstimate>> {
    simulate_metrics_with(cfg, n, seed, EavesdropperModel::Independent)
}

pub fn simulate_metrics_with(
    cfg: &SecrecyConfig,
    n: usize,
    seed: u64,
    model: EavesdropperModel,
) -> Result<BTreeMap<&'static str, McEstimate>> {
    if n < MIN_SAMPLES {
        return Err(Error::param(
            "n",
            format!("{n} samples leave the standard error above 0.005; need at least {MIN_SAMPLES}"),
        ));
    }
    cfg.validate()?;
    let sigma = cfg.sigma();
    let fso = if cfg.fso.blockage_p < 1.0 { Some(MalagaSampler::new(&cfg.fso)?) } else { None };
    let gammas = [
        Gamma::new(cfg.rf_sr.mu as f64, 1.0).map_err(|e| Error::param("mu_r", e.to_string()))?,
        Gamma::new(cfg.rf_sp.mu as f64, 1.0).map_err(|e| Error::param("mu_p", e.to_string()))?,
        Gamma::new(cfg.rf_se.mu as f64, 1.0).map_err(|e| Error::param("mu_e", e.to_string()))?,
    ];
    let chans = [cfg.rf_sr, cfg.rf_sp, cfg.rf_se];
    let parts: Vec<Result<Counts>> = blocks(n)
        .map(|(b, len)| {
            let mut rngs = [
                stream(seed, Component::SourceRelay, b),
                stream(seed, Component::SourcePrimary, b),
                stream(seed, Component::SourceEavesdropper, b),
            ];
            let mut fso_rng = stream(seed, Component::Fso, b);
            let mut block_rng = stream(seed, Component::Blockage, b);
            let mut c = Counts::default();
            for _ in 0..len {
                let mut x = [0.0; 3];
                for k in 0..3 {
                    x[k] = (gammas[k].sample(&mut rngs[k]) / chans[k].delta()).powf(1.0 / chans[k].a_tilde());
                }
                let p = scenario_power(cfg, cfg.pc.scenario, x[1])?;
                let g_rf = p * x[0];
                let g_e = match model {
                    EavesdropperModel::Independent => x[2],
                    EavesdropperModel::SharedTransmitPower => p * x[2],
                };
                let g_o = match &fso {
                    Some(s) => {
                        let v = s.draw(&mut fso_rng);
                        if block_rng.random::<f64>() < cfg.fso.blockage_p {
                            0.0
                        } else {
                            v
                        }
                    }
                    None => 0.0,
                };
                let g_f = g_rf.max(g_o);
                c.sop += (g_f <= sigma * g_e + sigma - 1.0) as u64;
                c.sop_l += (g_f <= sigma * g_e) as u64;
                c.nonpositive += (g_f <= g_e) as u64;
            }
            Ok(c)
        })
        .collect();
    let mut t = Counts::default();
    for p in parts {
        let c = p?;
        t.sop += c.sop;
        t.sop_l += c.sop_l;
        t.nonpositive += c.nonpositive;
    }
    let sop = McEstimate::probability(t.sop, n, seed);
    let sop_l = McEstimate::probability(t.sop_l, n, seed);
    let np = McEstimate::probability(t.nonpositive, n, seed);
    let rate = cfg.target_rate;
    let mut out = BTreeMap::new();
    out.insert("SOP", sop);
    out.insert("SOP_L", sop_l);
    out.insert("SPSC", McEstimate { estimate: 1.0 - np.estimate, ..np });
    out.insert(
        "EST",
        McEstimate { estimate: rate * (1.0 - sop.estimate), std_error: rate * sop.std_error, n, seed },
    );
    Ok(out)
}

/// The MC estimate that corresponds to an analytic metric: SOP_L for the SOP
/// lower bound, SPSC, and `Υ_e(1 − SOP_L)` for EST (the analytic throughput is
/// built on the lower bound).
pub fn estimate_for(kind: MetricKind, cfg: &SecrecyConfig, m: &BTreeMap<&'static str, McEstimate>) -> McEstimate {
    match kind {
        MetricKind::SopLower => m["SOP_L"],
        MetricKind::Spsc => m["SPSC"],
        MetricKind::Est => {
            let s = m["SOP_L"];
            McEstimate {
                estimate: cfg.target_rate * (1.0 - s.estimate),
                std_error: cfg.target_rate * s.std_error,
                ..s
            }
        }
    }
}
