//! Seeded simulators for the process families compared in the asymmetry
//! study. Every simulator emits a log-price series on the 1-tick grid,
//! starting at `x(0) = 0`, after discarding a burn-in period.

mod arch;
mod regime;
pub mod rng;
mod sv;

pub use arch::{ArchVariant, Garch11, GaussianRw, MultiscaleArch};
pub use regime::RegimeSwitching;
pub use sv::{ExpOuSv, Heston};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{RegularSeries, SeriesKind, TICKS_PER_YEAR};
use rng::{stream_rng, RETURN_STREAM};

/// Length of the empirical sample the study reproduces: 11.5 years.
pub const FULL_SCALE_TICKS: usize = 2_014_800;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProcessSpec {
    GaussianRw(GaussianRw),
    Garch11(Garch11),
    MultiscaleArch(MultiscaleArch),
    ExpOuSv(ExpOuSv),
    Heston(Heston),
    RegimeSwitching(RegimeSwitching),
}

/// Names accepted by [`ProcessSpec::preset`], in table order.
pub const PRESET_NAMES: [&str; 9] = [
    "gaussian_rw",
    "garch11",
    "lm_arch",
    "mkt_arch",
    "exp_sv",
    "lm_exp_sv",
    "heston",
    "lm_heston",
    "regime_switching",
];

impl ProcessSpec {
    /// Process with its documented default parameters.
    pub fn preset(name: &str) -> Result<Self> {
        Ok(match name {
            "gaussian_rw" => ProcessSpec::GaussianRw(GaussianRw::default()),
            "garch11" => ProcessSpec::Garch11(Garch11::with_annual_vol(0.02, 0.979, 0.1)),
            "lm_arch" => ProcessSpec::MultiscaleArch(MultiscaleArch::lm_default()),
            "mkt_arch" => ProcessSpec::MultiscaleArch(MultiscaleArch::mkt_default()),
            "exp_sv" => ProcessSpec::ExpOuSv(ExpOuSv::plain_default()),
            "lm_exp_sv" => ProcessSpec::ExpOuSv(ExpOuSv::lm_default()),
            "heston" => ProcessSpec::Heston(Heston::plain_default()),
            "lm_heston" => ProcessSpec::Heston(Heston::lm_default()),
            "regime_switching" => ProcessSpec::RegimeSwitching(RegimeSwitching::default()),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown process '{other}' (expected one of {})",
                    PRESET_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::GaussianRw(p) => p.validate(),
            ProcessSpec::Garch11(p) => p.validate(),
            ProcessSpec::MultiscaleArch(p) => p.validate(),
            ProcessSpec::ExpOuSv(p) => p.validate(),
            ProcessSpec::Heston(p) => p.validate(),
            ProcessSpec::RegimeSwitching(p) => p.validate(),
        }
    }

    /// Longest memory timescale of the process, in ticks.
    pub fn longest_timescale(&self) -> f64 {
        match self {
            ProcessSpec::GaussianRw(_) => 0.0,
            ProcessSpec::Garch11(p) => p.memory_ticks(),
            ProcessSpec::MultiscaleArch(p) => p.timescales().into_iter().fold(0.0, f64::max),
            ProcessSpec::ExpOuSv(p) => p.timescales.iter().copied().fold(0.0, f64::max),
            ProcessSpec::Heston(p) => p.kappa.iter().map(|k| TICKS_PER_YEAR as f64 / k).fold(0.0, f64::max),
            ProcessSpec::RegimeSwitching(p) => p.longest_dwell(),
        }
    }

    /// Whether the volatility is driven by its own noise, independent of returns.
    pub fn has_exogenous_volatility(&self) -> bool {
        matches!(
            self,
            ProcessSpec::ExpOuSv(_) | ProcessSpec::Heston(_) | ProcessSpec::RegimeSwitching(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Number of log-price samples emitted.
    pub n_ticks: usize,
    /// Discarded ticks; `None` uses four times the longest process timescale.
    pub burn_in: Option<usize>,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_ticks: FULL_SCALE_TICKS,
            burn_in: None,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn new(n_ticks: usize, seed: u64) -> Self {
        SimConfig {
            n_ticks,
            burn_in: None,
            seed,
        }
    }

    pub fn burn_in_for(&self, spec: &ProcessSpec) -> usize {
        self.burn_in
            .unwrap_or_else(|| (4.0 * spec.longest_timescale()).ceil() as usize)
    }
}

/// Per-tick returns, burn-in included.
fn raw_returns<T: Scalar>(spec: &ProcessSpec, total: usize, seed: u64) -> Vec<T> {
    match spec {
        ProcessSpec::GaussianRw(p) => p.returns(total, seed),
        ProcessSpec::Garch11(p) => p.returns(total, seed),
        ProcessSpec::MultiscaleArch(p) => p.returns(total, seed),
        ProcessSpec::ExpOuSv(_) | ProcessSpec::Heston(_) | ProcessSpec::RegimeSwitching(_) => {
            let vol = exogenous_vol_path::<T>(spec, total, seed);
            let mut eps = stream_rng(seed, RETURN_STREAM);
            vol.into_iter().map(|s| s * T::standard_normal(&mut eps)).collect()
        }
    }
}

fn exogenous_vol_path<T: Scalar>(spec: &ProcessSpec, total: usize, seed: u64) -> Vec<T> {
    match spec {
        ProcessSpec::ExpOuSv(p) => p.vol_path(total, seed),
        ProcessSpec::Heston(p) => p.vol_path(total, seed),
        ProcessSpec::RegimeSwitching(p) => p.vol_path(total, seed),
        _ => unreachable!("volatility of ARCH processes depends on returns"),
    }
}

fn check_config(cfg: &SimConfig) -> Result<()> {
    if cfg.n_ticks < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_ticks must be at least 2, got {}",
            cfg.n_ticks
        )));
    }
    Ok(())
}

/// Simulates one log-price path. Identical `(spec, cfg)` give bitwise
/// identical output.
pub fn simulate<T: Scalar>(spec: &ProcessSpec, cfg: &SimConfig) -> Result<RegularSeries<T>> {
    spec.validate()?;
    check_config(cfg)?;
    let burn = cfg.burn_in_for(spec);
    let r = raw_returns::<T>(spec, burn + cfg.n_ticks - 1, cfg.seed);
    let mut x = T::zero();
    let mut values = Vec::with_capacity(cfg.n_ticks);
    values.push(x);
    for v in &r[burn..] {
        x = x + *v;
        values.push(x);
    }
    RegularSeries::new(0, values, SeriesKind::LogPrice)
}

/// Per-tick return standard deviation `sigma(t)` of a stochastic volatility
/// or regime-switching path, aligned with the returns of [`simulate`]:
/// entry `i` scales the return ending at tick `i + 1`. Built from the
/// volatility streams only.
pub fn volatility_path<T: Scalar>(spec: &ProcessSpec, cfg: &SimConfig) -> Result<Vec<T>> {
    spec.validate()?;
    check_config(cfg)?;
    if !spec.has_exogenous_volatility() {
        return Err(Error::InvalidParameter(
            "ARCH-family volatility is a function of the returns; simulate the path instead".into(),
        ));
    }
    let burn = cfg.burn_in_for(spec);
    let mut v = exogenous_vol_path::<T>(spec, burn + cfg.n_ticks - 1, cfg.seed);
    v.drain(..burn);
    Ok(v)
}

/// The `i`-th return residual stream value of a path; exposed for checks that
/// rebuild a path from its independent inputs.
pub fn return_residuals<T: Scalar>(seed: u64, count: usize) -> Vec<T> {
    let mut eps = stream_rng(seed, RETURN_STREAM);
    (0..count).map(|_| T::standard_normal(&mut eps)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates_and_runs() {
        for name in PRESET_NAMES {
            let spec = ProcessSpec::preset(name).unwrap();
            spec.validate().unwrap();
            let cfg = SimConfig {
                n_ticks: 500,
                burn_in: Some(100),
                seed: 1,
            };
            let x: RegularSeries<f64> = simulate(&spec, &cfg).unwrap();
            assert_eq!(x.len(), 500);
            assert_eq!(x.values()[0], 0.0);
            let y: RegularSeries<f32> = simulate(&spec, &cfg).unwrap();
            assert_eq!(y.len(), 500);
        }
        assert!(ProcessSpec::preset("nope").is_err());
    }

    #[test]
    fn simulation_is_deterministic() {
        let spec = ProcessSpec::preset("lm_arch").unwrap();
        let cfg = SimConfig {
            n_ticks: 2000,
            burn_in: Some(50),
            seed: 42,
        };
        let a: RegularSeries<f64> = simulate(&spec, &cfg).unwrap();
        let b: RegularSeries<f64> = simulate(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        let c: RegularSeries<f64> = simulate(&spec, &SimConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_vol_random_walk_is_constant() {
        let spec = ProcessSpec::GaussianRw(GaussianRw { sigma_annual: 0.0 });
        let x: RegularSeries<f64> = simulate(&spec, &SimConfig::new(100, 5)).unwrap();
        assert!(x.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn degenerate_garch_is_a_random_walk() {
        let omega = 1e-7;
        let garch = ProcessSpec::Garch11(Garch11 {
            omega,
            alpha: 0.0,
            beta: 0.0,
        });
        let rw = ProcessSpec::GaussianRw(GaussianRw {
            sigma_annual: (omega * TICKS_PER_YEAR as f64).sqrt(),
        });
        let cfg = SimConfig {
            n_ticks: 300,
            burn_in: Some(0),
            seed: 9,
        };
        let a: RegularSeries<f64> = simulate(&garch, &cfg).unwrap();
        let b: RegularSeries<f64> = simulate(&rw, &cfg).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn burn_in_defaults_to_four_timescales() {
        let spec = ProcessSpec::preset("lm_arch").unwrap();
        assert_eq!(SimConfig::new(10, 0).burn_in_for(&spec), 4 * 4096);
        assert_eq!(
            SimConfig::new(10, 0).burn_in_for(&ProcessSpec::preset("gaussian_rw").unwrap()),
            0
        );
    }

    #[test]
    fn arch_has_no_exogenous_vol_path() {
        let spec = ProcessSpec::preset("garch11").unwrap();
        assert!(volatility_path::<f64>(&spec, &SimConfig::new(10, 0)).is_err());
    }

    #[test]
    fn invalid_configs() {
        let spec = ProcessSpec::preset("gaussian_rw").unwrap();
        assert!(simulate::<f64>(&spec, &SimConfig::new(1, 0)).is_err());
        let bad = ProcessSpec::Garch11(Garch11 {
            omega: 1.0,
            alpha: 0.6,
            beta: 0.6,
        });
        assert_eq!(
            simulate::<f64>(&bad, &SimConfig::new(10, 0)).unwrap_err().kind(),
            "InvalidParameter"
        );
    }
}
