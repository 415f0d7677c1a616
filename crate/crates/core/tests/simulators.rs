use timerev::process::{return_residuals, volatility_path, ProcessSpec, SimConfig, PRESET_NAMES};
use timerev::{simulate, Series, Series32};

fn abs_returns(x: &Series) -> Vec<f64> {
    x.values().windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

fn autocorr(v: &[f64], lag: usize) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var: f64 = v.iter().map(|a| (a - m) * (a - m)).sum();
    let cov: f64 = v.windows(lag + 1).map(|w| (w[0] - m) * (w[lag] - m)).sum();
    cov / var
}

#[test]
fn paths_are_seeded_and_start_at_zero() {
    for name in PRESET_NAMES {
        let spec = ProcessSpec::preset(name).unwrap();
        let cfg = SimConfig::new(3000, 5);
        let a: Series = simulate(&spec, &cfg).unwrap();
        let b: Series = simulate(&spec, &cfg).unwrap();
        let c: Series = simulate(&spec, &SimConfig::new(3000, 6)).unwrap();
        assert_eq!(a.len(), 3000);
        assert_eq!(a.values()[0], 0.0);
        assert_eq!(a, b, "{name}");
        assert_ne!(a, c, "{name}");
        assert!(a.values().iter().all(|v| v.is_finite()));
        let f: Series32 = simulate(&spec, &cfg).unwrap();
        assert_eq!(f.len(), 3000);
        assert!(f.values().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn exogenous_paths_rebuild_from_their_inputs() {
    for name in ["exp_sv", "lm_heston", "regime_switching"] {
        let spec = ProcessSpec::preset(name).unwrap();
        let cfg = SimConfig {
            n_ticks: 2000,
            burn_in: Some(300),
            seed: 8,
        };
        let x: Series = simulate(&spec, &cfg).unwrap();
        let vol: Vec<f64> = volatility_path(&spec, &cfg).unwrap();
        let eps: Vec<f64> = return_residuals(cfg.seed, 300 + 1999);
        assert_eq!(vol.len(), 1999);
        for i in 0..1999 {
            let r = x.values()[i + 1] - x.values()[i];
            assert!((r - vol[i] * eps[300 + i]).abs() < 1e-14, "{name} tick {i}");
        }
    }
    assert!(volatility_path::<f64>(&ProcessSpec::preset("garch11").unwrap(), &SimConfig::new(100, 1)).is_err());
}

#[test]
fn arch_processes_cluster_volatility() {
    for name in ["garch11", "lm_arch", "mkt_arch"] {
        let x: Series = simulate(&ProcessSpec::preset(name).unwrap(), &SimConfig::new(200_000, 3)).unwrap();
        let a = abs_returns(&x);
        assert!(autocorr(&a, 20) > 0.02, "{name}: {}", autocorr(&a, 20));
    }
    let x: Series = simulate(
        &ProcessSpec::preset("gaussian_rw").unwrap(),
        &SimConfig::new(200_000, 3),
    )
    .unwrap();
    assert!(autocorr(&abs_returns(&x), 20).abs() < 0.01);
}

#[test]
fn presets_have_ten_percent_scale_volatility() {
    for name in PRESET_NAMES {
        let x: Series = simulate(&ProcessSpec::preset(name).unwrap(), &SimConfig::new(175_200, 4)).unwrap();
        let v = x.values();
        let var = v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        let annual = (var * 175_200.0).sqrt();
        assert!((0.04..0.25).contains(&annual), "{name}: {annual}");
    }
}
