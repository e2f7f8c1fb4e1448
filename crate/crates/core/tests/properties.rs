//! Randomized properties of the special functions, distribution functions and metrics.

use hybrid_secrecy::channels::{alpha_mu_cdf, alpha_mu_cdf_finite, Detection, FsoLinkParams, RfChannelParams};
use hybrid_secrecy::cun::{
    cdf_hybrid_scenario1, cdf_hybrid_scenario1_expanded, cdf_hybrid_scenario2, cdf_hybrid_scenario2_expanded,
    PowerConstraints,
};
use hybrid_secrecy::secrecy::{est, sop_lower, spsc, SecrecyConfig};
use hybrid_secrecy::series::SeriesPolicy;
use hybrid_secrecy::specfun::{
    fox_h, gamma_fn, gamma_p, gamma_q, lower_incomplete_gamma, meijer_g, upper_incomplete_gamma, ContourPolicy,
    FoxHKernel, FoxHSpec, MeijerGSpec,
};
use proptest::prelude::*;

fn pol() -> ContourPolicy<f64> {
    ContourPolicy::default()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incomplete_gamma_complementarity(a in 0.1f64..30.0, x in 0.0f64..60.0) {
        let (p, q) = (gamma_p(a, x).unwrap(), gamma_q(a, x).unwrap());
        prop_assert!((p + q - 1.0).abs() < 1e-12);
        let g = gamma_fn(a).unwrap();
        let sum = lower_incomplete_gamma(a, x).unwrap() + upper_incomplete_gamma(a, x).unwrap();
        prop_assert!(rel(sum, g) < 1e-9);
    }

    /// `G^{1,0}_{0,1}[z | −; b] = z^b e^{−z}`.
    #[test]
    fn meijer_exponential(b in 0.0f64..3.0, z in 0.01f64..20.0) {
        let g = meijer_g(&MeijerGSpec::new(1, 0, vec![], vec![b], z).unwrap(), &pol()).unwrap();
        let want = z.powf(b) * (-z).exp();
        prop_assert!(rel(g, want) < 1e-9, "{} vs {}", g, want);
    }

    /// `G^{1,1}_{1,2}[z | 1; a, 0] = γ(a, z)`.
    #[test]
    fn meijer_incomplete_gamma(a in 0.3f64..6.0, z in 0.05f64..15.0) {
        let g = meijer_g(&MeijerGSpec::new(1, 1, vec![1.0], vec![a, 0.0], z).unwrap(), &pol()).unwrap();
        let want = lower_incomplete_gamma(a, z).unwrap();
        prop_assert!(rel(g, want) < 1e-9, "{} vs {}", g, want);
    }

    /// Unit coefficients reduce H to G, and `H^{1,0}_{0,1}[z | (b, B)] = z^{b/B} e^{−z^{1/B}}/B`.
    #[test]
    fn fox_reduces_to_meijer(b in 0.0f64..2.0, big_b in 0.5f64..2.5, z in 0.05f64..8.0) {
        let g = MeijerGSpec::new(1, 1, vec![1.0], vec![b + 0.2, 0.0], z).unwrap();
        let h = fox_h(&g.to_fox().unwrap(), &pol()).unwrap();
        prop_assert!(rel(h, meijer_g(&g, &pol()).unwrap()) < 1e-9);
        let k = FoxHKernel::new(1, 0, vec![], vec![(b, big_b)]).unwrap();
        let v = fox_h(&FoxHSpec::new(k, z).unwrap(), &pol()).unwrap();
        let want = z.powf(b / big_b) * (-z.powf(1.0 / big_b)).exp() / big_b;
        prop_assert!(rel(v, want) < 1e-9, "{} vs {}", v, want);
    }

    #[test]
    fn alpha_mu_forms_agree(alpha in 0.5f64..6.0, mu in 1u32..8, phi in -10.0f64..20.0, g in 0.0f64..50.0) {
        let ch = RfChannelParams::new(alpha, mu, phi).unwrap();
        let (c, f) = (alpha_mu_cdf(&ch, g).unwrap(), alpha_mu_cdf_finite(&ch, g).unwrap());
        prop_assert!((c - f).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!(alpha_mu_cdf(&ch, g * 1.5 + 0.1).unwrap() >= c);
    }
}

fn fso(s: u32, epsilon: f64, phi_o: f64, p_o: f64, turbulence: usize) -> FsoLinkParams {
    let (alpha_o, beta_o) = [(2.296, 2), (4.2, 3), (8.0, 4)][turbulence];
    FsoLinkParams {
        alpha_o,
        beta_o,
        g: 2.0,
        omega: 1.0,
        epsilon,
        detection: Detection::from_order(s).unwrap(),
        avg_snr_db: phi_o,
        blockage_p: p_o,
    }
}

prop_compose! {
    fn configs()(
        alpha in prop::sample::select(vec![1.0, 2.0, 3.0]),
        alpha_e in prop::sample::select(vec![1.0, 2.0, 4.0]),
        mu in (1u32..4, 1u32..4, 1u32..4),
        phi in (-5.0f64..20.0, -5.0f64..20.0, -10.0f64..20.0),
        s in 1u32..3,
        epsilon in prop::sample::select(vec![1.0, 6.7]),
        phi_o in -5.0f64..20.0,
        p_o in 0.0f64..1.0,
        turbulence in 0usize..3,
        psi_q in -10.0f64..20.0,
        psi_t in prop::option::of(-10.0f64..20.0),
        rate in 0.0f64..1.0,
    ) -> SecrecyConfig {
        SecrecyConfig {
            rf_sr: RfChannelParams::new(alpha, mu.0, phi.0).unwrap(),
            rf_sp: RfChannelParams::new(alpha, mu.1, phi.1).unwrap(),
            rf_se: RfChannelParams::new(alpha_e, mu.2, phi.2).unwrap(),
            fso: fso(s, epsilon, phi_o, p_o, turbulence),
            pc: match psi_t {
                Some(t) => PowerConstraints::double(psi_q, t),
                None => PowerConstraints::interference(psi_q),
            },
            target_rate: rate,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The term-by-term expansions equal the branch product.
    #[test]
    fn expanded_cdf_equals_product(cfg in configs(), g in 0.0f64..200.0) {
        let sp = SeriesPolicy::default();
        match cfg.pc.psi_t_db {
            None => {
                let a = cdf_hybrid_scenario1(&cfg, g).unwrap();
                let b = cdf_hybrid_scenario1_expanded(&cfg, g, &pol()).unwrap();
                prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            }
            Some(_) => {
                let a = cdf_hybrid_scenario2(&cfg, g, &sp).unwrap();
                let b = cdf_hybrid_scenario2_expanded(&cfg, g, &pol()).unwrap();
                prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Bounds and the definitional identities, exactly, on random configurations.
    #[test]
    fn metric_bounds_and_identities(cfg in configs()) {
        let sp = SeriesPolicy::default();
        let s = sop_lower(&cfg, &sp).unwrap();
        let p = spsc(&cfg, &sp).unwrap();
        let e = est(&cfg, &sp).unwrap();
        prop_assert!((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&p));
        prop_assert!(e >= 0.0 && e <= cfg.target_rate);
        prop_assert_eq!(p, 1.0 - sop_lower(&cfg.with_target_rate(0.0), &sp).unwrap());
        prop_assert_eq!(e, cfg.target_rate * (1.0 - s));
    }
}
