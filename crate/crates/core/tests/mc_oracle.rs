//! Monte-Carlo oracle: sampler laws, blockage, metric estimates and reproducibility.

#![allow(clippy::excessive_precision)]

use std::path::PathBuf;

use hybrid_secrecy::channels::{electrical_snr, malaga_pdf, Detection, FsoLinkParams, RfChannelParams};
use hybrid_secrecy::config::load_config;
use hybrid_secrecy::cun::{PowerConstraints, Scenario};
use hybrid_secrecy::mc::{
    apply_blockage, null_std_error, sample_alpha_mu, sample_batch, sample_malaga_snr, simulate_metrics, simulate_metrics_with,
    EavesdropperModel,
};
use hybrid_secrecy::quad::{integrate, integrate_from};
use hybrid_secrecy::secrecy::{sop_lower, MetricKind, SecrecyConfig};
use hybrid_secrecy::series::SeriesPolicy;

const N: usize = 1_000_000;

fn config(name: &str) -> SecrecyConfig {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"));
    load_config(&p).unwrap().secrecy
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

fn strong_fso(s: Detection, epsilon: f64) -> FsoLinkParams {
    FsoLinkParams {
        alpha_o: 2.296,
        beta_o: 2,
        g: 2.0,
        omega: 1.0,
        epsilon,
        detection: s,
        avg_snr_db: 10.0,
        blockage_p: 0.0,
    }
}

#[test]
fn exponential_mean_and_support() {
    let xs = sample_alpha_mu(&RfChannelParams::new(2.0, 1, 0.0).unwrap(), N, 11).unwrap();
    let (m, _) = mean_sd(&xs);
    assert!((m - 1.0).abs() < 3e-3, "mean {m}");
    assert!(xs.iter().all(|&x| x >= 0.0));
}

#[test]
fn gamma_power_moment() {
    // δ = Φ^{−α̃} gives E[γ] = Φ Γ(μ + 2/α)/Γ(μ); mean and standard deviation from mpmath.
    const MEAN: f64 = 7.5228774412577800941;
    const SD: f64 = 3.5861228387711986916;
    let xs = sample_alpha_mu(&RfChannelParams::new(3.0, 2, 10.0 * 5f64.log10()).unwrap(), N, 12).unwrap();
    let (m, _) = mean_sd(&xs);
    assert!((m - MEAN).abs() < 4.0 * SD / (N as f64).sqrt(), "mean {m}");
}

#[test]
fn malaga_normalized_mean() {
    for eps in [1.0, 6.7] {
        let fso = strong_fso(Detection::Heterodyne, eps);
        let xs = sample_malaga_snr(&fso, N, 13).unwrap();
        let mu = electrical_snr(&fso).unwrap();
        assert_eq!(mu, 10.0);
        let ratios: Vec<f64> = xs.iter().map(|x| x / mu).collect();
        let (m, sd) = mean_sd(&ratios);
        assert!((m - 1.0).abs() < 3.0 * sd / (N as f64).sqrt(), "ε={eps}: mean {m}");
    }
}

/// Pearson χ² of a 20-bin histogram against bin masses integrated from the
/// density. The 0.999 quantile of χ²(20) is 45.31.
#[test]
fn malaga_histogram_matches_density() {
    for s in [Detection::Heterodyne, Detection::IntensityModulation] {
        let fso = strong_fso(s, 1.0);
        let n = 200_000;
        let xs = sample_malaga_snr(&fso, n, 14).unwrap();
        let mu = electrical_snr(&fso).unwrap();
        let edges: Vec<f64> = (1..=20).map(|k| mu * 0.02 * 1.3f64.powi(k)).collect();
        let mut p = Vec::new();
        for w in edges.windows(2) {
            p.push(integrate(|x| malaga_pdf(&fso, x).unwrap(), w[0], w[1], 1e-10).unwrap().value);
        }
        let last = *edges.last().unwrap();
        let tail = integrate_from(|x| malaga_pdf(&fso, x).unwrap(), last, mu, 1e-10).unwrap().value;
        let head = 1.0 - p.iter().sum::<f64>() - tail;
        let mut probs = vec![head];
        probs.extend(p);
        probs.push(tail);
        let mut counts = vec![0usize; probs.len()];
        for &x in &xs {
            counts[edges.partition_point(|&e| e <= x)] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(&probs)
            .map(|(&c, &q)| {
                let e = q * n as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        assert!(probs.iter().all(|&q| q * n as f64 > 5.0));
        assert!(chi2 < 45.31, "s={}: χ² = {chi2}", s.order());
    }
}

#[test]
fn blockage_extremes_and_rate() {
    let xs: Vec<f64> = (1..=N).map(|i| i as f64).collect();
    assert_eq!(apply_blockage(&xs, 0.0, 15).unwrap(), xs);
    assert!(apply_blockage(&xs, 1.0, 15).unwrap().iter().all(|&x| x == 0.0));
    let half = apply_blockage(&xs, 0.5, 15).unwrap();
    let zeros = half.iter().filter(|&&x| x == 0.0).count() as f64 / N as f64;
    assert!((zeros - 0.5).abs() < 0.0015, "zero fraction {zeros}");
    assert!(apply_blockage(&xs, 1.5, 15).is_err());
}

#[test]
fn batch_has_blockage_atom() {
    let cfg = config("sop_vs_psi_t");
    let b = sample_batch(&cfg, 200_000, 16, EavesdropperModel::Independent).unwrap();
    let atom = b.gamma_o.iter().filter(|&&x| x == 0.0).count() as f64 / b.n as f64;
    let se = (0.2f64 * 0.8 / b.n as f64).sqrt();
    assert!((atom - 0.2).abs() < 4.0 * se, "atom {atom}");
    for v in [&b.gamma_p, &b.gamma_r, &b.gamma_e, &b.gamma_o, &b.gamma_rf] {
        assert!(v.iter().all(|&x| x >= 0.0) && v.len() == b.n);
    }
}

/// S–R and S–E identical, FSO blocked, eavesdropper scaled by the same transmit
/// power: γ_r and γ_e are exchangeable, so SPSC = 1/2.
#[test]
fn symmetric_configuration_spsc_half() {
    let rf = RfChannelParams::new(2.0, 2, 10.0).unwrap();
    let cfg = SecrecyConfig {
        rf_sr: rf,
        rf_sp: RfChannelParams::new(2.0, 2, 5.0).unwrap(),
        rf_se: rf,
        fso: FsoLinkParams { blockage_p: 1.0, ..strong_fso(Detection::Heterodyne, 1.0) },
        pc: PowerConstraints::interference(0.0),
        target_rate: 0.05,
    };
    let m = simulate_metrics_with(&cfg, N, 17, EavesdropperModel::SharedTransmitPower).unwrap();
    let s = m["SPSC"];
    assert!((s.estimate - 0.5).abs() < 3.0 * s.std_error, "{s:?}");
}

#[test]
fn zero_rate_collapses_bound() {
    let cfg = config("sop_vs_psi_q").with_target_rate(0.0);
    let m = simulate_metrics(&cfg, 100_000, 18).unwrap();
    assert_eq!(m["SOP"].estimate, m["SOP_L"].estimate);
    assert_eq!(m["EST"].estimate, 0.0);
    assert_eq!(m["SPSC"].estimate, 1.0 - m["SOP_L"].estimate);
}

#[test]
fn exact_event_contains_bound_event() {
    for name in ["sop_vs_psi_q", "sop_vs_psi_t", "est_vs_psi_q"] {
        let cfg = config(name).with_target_rate(1.0);
        let m = simulate_metrics(&cfg, 100_000, 19).unwrap();
        assert!(m["SOP"].estimate >= m["SOP_L"].estimate, "{name}");
    }
}

#[test]
fn golden_interference_sop_two_seeds() {
    let cfg = config("sop_vs_psi_q");
    let analytic = sop_lower(&cfg, &SeriesPolicy::default()).unwrap();
    let a = simulate_metrics(&cfg, N, 20).unwrap()["SOP_L"];
    let b = simulate_metrics(&cfg, N, 21).unwrap()["SOP_L"];
    assert!(a.z_score(analytic).abs() <= 3.0, "{a:?} vs {analytic}");
    assert!(b.z_score(analytic).abs() <= 3.0, "{b:?} vs {analytic}");
    let combined = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    assert!((a.estimate - b.estimate).abs() < 6.0 * combined);
}

#[test]
fn reproducible_across_worker_counts() {
    let cfg = config("sop_vs_psi_t");
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| simulate_metrics(&cfg, 3 * 65_536 + 17, 22).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
}

#[test]
fn refuses_small_samples() {
    let cfg = config("sop_vs_psi_q");
    assert!(simulate_metrics(&cfg, 1_000, 1).is_err());
}

#[test]
fn transmit_cap_binds_relay_snr() {
    let mut cfg = config("sop_vs_psi_t");
    cfg.pc = PowerConstraints { scenario: Scenario::DoubleConstraint, psi_q_db: 60.0, psi_t_db: Some(0.0) };
    let b = sample_batch(&cfg, 50_000, 23, EavesdropperModel::Independent).unwrap();
    assert!(b.gamma_rf.iter().zip(&b.gamma_r).all(|(f, r)| (f - r).abs() <= 1e-12 * r.max(1.0)));
}

/// No observed events: the plug-in standard error is 0, the score statistic is not.
#[test]
fn score_statistic_survives_empty_counts() {
    let cfg = config("spsc_vs_phi_o");
    let m = simulate_metrics(&cfg, 100_000, 5).unwrap();
    let e = m["SOP_L"];
    assert_eq!(e.estimate, 0.0);
    assert_eq!(e.std_error, 0.0);
    let p = 1e-8;
    let se = null_std_error(MetricKind::SopLower, &cfg, p, e.n);
    assert!((se - (p * (1.0 - p) / 1e5).sqrt()).abs() < 1e-20);
    assert!(e.score_z(p, se).abs() < 0.1);
    assert!(e.z_score(p).is_infinite());
    let est = null_std_error(MetricKind::Est, &cfg, cfg.target_rate * (1.0 - p), e.n);
    assert!((est - cfg.target_rate * se).abs() < 1e-15);
}
