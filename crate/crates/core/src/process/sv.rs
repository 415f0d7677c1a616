//! Stochastic volatility processes. The volatility path is driven by its own
//! noise streams and never sees the returns.

use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, VOL_STREAM};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TICKS_PER_YEAR;

/// Exponential Ornstein-Uhlenbeck stochastic volatility.
///
/// `ln sigma(t) = mean_log_vol + sum_k y_k(t)` (annualized), with
/// `y_k(t) = a_k y_k(t-1) + amplitude_k * eta_k(t)` and `a_k = exp(-1/tau_k)`.
/// More than one component gives a volatility cascade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpOuSv {
    pub mean_log_vol: f64,
    pub timescales: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl ExpOuSv {
    /// Amplitudes chosen so each component has stationary standard deviation
    /// `log_vol_sd[k]`.
    pub fn from_stationary_sd(mean_vol_annual: f64, timescales: Vec<f64>, log_vol_sd: &[f64]) -> Self {
        let amplitudes = timescales
            .iter()
            .zip(log_vol_sd)
            .map(|(tau, sd)| sd * (1.0 - (-2.0 / tau).exp()).sqrt())
            .collect();
        ExpOuSv {
            mean_log_vol: mean_vol_annual.ln(),
            timescales,
            amplitudes,
        }
    }

    /// Single component, two-day memory.
    pub fn plain_default() -> Self {
        Self::from_stationary_sd(0.1, vec![960.0], &[0.4])
    }

    /// Eight components, timescales doubling from 16 ticks to about 4 days.
    pub fn lm_default() -> Self {
        let taus: Vec<f64> = (0..8).map(|k| 16.0 * 2f64.powi(k)).collect();
        let sd = vec![0.4 / 8f64.sqrt(); 8];
        Self::from_stationary_sd(0.1, taus, &sd)
    }

    pub fn ar_coefficients(&self) -> Vec<f64> {
        self.timescales.iter().map(|t| (-1.0 / t).exp()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.timescales.is_empty() || self.timescales.len() != self.amplitudes.len() {
            return Err(Error::InvalidParameter(
                "exp SV needs one amplitude per timescale and at least one component".into(),
            ));
        }
        if self.timescales.iter().any(|t| !(*t >= 1.0 && t.is_finite())) {
            return Err(Error::InvalidParameter("exp SV timescales must be >= 1 tick".into()));
        }
        if self.amplitudes.iter().any(|a| !a.is_finite()) || !self.mean_log_vol.is_finite() {
            return Err(Error::InvalidParameter("exp SV amplitudes must be finite".into()));
        }
        Ok(())
    }

    /// Per-tick return standard deviation.
    pub(crate) fn vol_path<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let a: Vec<T> = self.ar_coefficients().into_iter().map(T::lit).collect();
        let k: Vec<T> = self.amplitudes.iter().copied().map(T::lit).collect();
        let per_tick = T::lit(self.mean_log_vol - 0.5 * (TICKS_PER_YEAR as f64).ln());
        let mut rngs: Vec<_> = (0..a.len()).map(|c| stream_rng(seed, VOL_STREAM + c as u64)).collect();
        let mut y = vec![T::zero(); a.len()];
        (0..total)
            .map(|_| {
                let mut log_vol = per_tick;
                for c in 0..a.len() {
                    y[c] = a[c] * y[c] + k[c] * T::standard_normal(&mut rngs[c]);
                    log_vol = log_vol + y[c];
                }
                log_vol.exp()
            })
            .collect()
    }
}

/// Heston-type variance cascade, annualized parameters.
///
/// Each component follows a full-truncation Euler CIR step with
/// `dt = 1 / 175200`; the return variance is the sum of the truncated
/// components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heston {
    pub kappa: Vec<f64>,
    pub theta: Vec<f64>,
    pub xi: Vec<f64>,
}

impl Heston {
    /// One-day mean reversion at 10% long-run volatility.
    pub fn plain_default() -> Self {
        Heston {
            kappa: vec![365.0],
            theta: vec![0.01],
            xi: vec![2.0],
        }
    }

    /// Six components with reversion times from two hours to about a week.
    pub fn lm_default() -> Self {
        let n: usize = 6;
        let kappa: Vec<f64> = (0..n).map(|k| 4380.0 / 2f64.powi(k as i32)).collect();
        let theta = vec![0.01 / n as f64; n];
        // Keep 2 kappa theta >= xi^2 for every component.
        let xi = kappa
            .iter()
            .zip(&theta)
            .map(|(k, t)| 0.9 * (2.0 * k * t).sqrt())
            .collect();
        Heston { kappa, theta, xi }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.kappa.len();
        if n == 0 || self.theta.len() != n || self.xi.len() != n {
            return Err(Error::InvalidParameter(
                "Heston needs equal-length kappa, theta, xi".into(),
            ));
        }
        let positive = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !(positive(&self.kappa) && positive(&self.theta)) || self.xi.iter().any(|x| x.is_nan() || *x < 0.0) {
            return Err(Error::InvalidParameter(
                "Heston needs kappa, theta > 0 and xi >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Per-component variance paths, truncated at zero.
    pub(crate) fn variance_paths<T: Scalar>(&self, total: usize, seed: u64) -> Vec<Vec<T>> {
        let dt = 1.0 / TICKS_PER_YEAR as f64;
        (0..self.kappa.len())
            .map(|c| {
                let kdt = T::lit(self.kappa[c] * dt);
                let theta = T::lit(self.theta[c]);
                let xi = T::lit(self.xi[c]);
                let sdt = T::lit(dt.sqrt());
                let mut rng = stream_rng(seed, VOL_STREAM + c as u64);
                let mut v = theta;
                (0..total)
                    .map(|_| {
                        let vp = v.max(T::zero());
                        v = v + kdt * (theta - vp) + xi * (vp).sqrt() * sdt * T::standard_normal(&mut rng);
                        v.max(T::zero())
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn vol_path<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let paths = self.variance_paths::<T>(total, seed);
        let dt = T::lit(1.0 / TICKS_PER_YEAR as f64);
        (0..total)
            .map(|t| (paths.iter().fold(T::zero(), |acc, p| acc + p[t]) * dt).sqrt())
            .collect()
    }
}
