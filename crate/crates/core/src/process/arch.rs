//! Random walk and ARCH-family processes: volatility is a function of past
//! returns.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, RETURN_STREAM};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TICKS_PER_YEAR;

fn per_tick_variance(annual_vol: f64) -> f64 {
    annual_vol * annual_vol / TICKS_PER_YEAR as f64
}

/// `x(t) = x(t-1) + s * eps(t)` with `s = sigma_annual / sqrt(1 year)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianRw {
    pub sigma_annual: f64,
}

impl Default for GaussianRw {
    fn default() -> Self {
        GaussianRw { sigma_annual: 0.1 }
    }
}

impl GaussianRw {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_annual.is_finite() && self.sigma_annual >= 0.0) {
            return Err(Error::InvalidParameter(format!("sigma_annual = {}", self.sigma_annual)));
        }
        Ok(())
    }

    pub(crate) fn returns<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let s = T::lit(per_tick_variance(self.sigma_annual).sqrt());
        let mut eps = stream_rng(seed, RETURN_STREAM);
        (0..total).map(|_| s * T::standard_normal(&mut eps)).collect()
    }
}

/// GARCH(1,1) on the tick grid, all parameters per tick:
/// `sigma^2(t) = omega + alpha r^2(t-1) + beta sigma^2(t-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Garch11 {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Garch11 {
    /// Sets `omega` so the stationary volatility equals `annual_vol`.
    pub fn with_annual_vol(alpha: f64, beta: f64, annual_vol: f64) -> Self {
        Garch11 {
            omega: per_tick_variance(annual_vol) * (1.0 - alpha - beta),
            alpha,
            beta,
        }
    }

    pub fn stationary_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }

    /// E-folding time of variance shocks, in ticks.
    pub fn memory_ticks(&self) -> f64 {
        -1.0 / (self.alpha + self.beta).ln()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.omega > 0.0
            && self.alpha >= 0.0
            && self.beta >= 0.0
            && self.alpha + self.beta < 1.0
            && self.omega.is_finite();
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "GARCH(1,1) needs omega > 0, alpha, beta >= 0, alpha + beta < 1 (got {}, {}, {})",
                self.omega, self.alpha, self.beta
            )));
        }
        Ok(())
    }

    pub(crate) fn returns<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let (omega, alpha, beta) = (T::lit(self.omega), T::lit(self.alpha), T::lit(self.beta));
        let mut var = T::lit(self.stationary_variance());
        let mut eps = stream_rng(seed, RETURN_STREAM);
        let mut out = Vec::with_capacity(total);
        for _ in 0..total {
            let r = var.sqrt() * T::standard_normal(&mut eps);
            out.push(r);
            var = omega + alpha * r * r + beta * var;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchVariant {
    /// Logarithmically decaying weights across components.
    LmAffine,
    /// Weights concentrated at market time horizons (hours, day, week).
    MktAffine,
}

/// Affine multiscale ARCH with aggregated returns.
///
/// Component `k` is an exponential moving average, with timescale
/// `tau_k = tau_1 * ratio^k`, of squared returns aggregated over
/// `max(1, round(tau_k / coupling))` ticks and divided by that interval.
/// The effective variance is `w_inf * mean_var + sum_k w_k sigma_k^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiscaleArch {
    pub variant: ArchVariant,
    pub components: usize,
    pub tau_1: f64,
    pub ratio: f64,
    pub coupling: f64,
    pub w_inf: f64,
    /// Explicit component weights; `None` uses the variant's profile.
    pub weights: Option<Vec<f64>>,
    pub mean_vol_annual: f64,
}

impl MultiscaleArch {
    pub fn lm_default() -> Self {
        MultiscaleArch {
            variant: ArchVariant::LmAffine,
            components: 10,
            tau_1: 8.0,
            ratio: 2.0,
            coupling: 24.0,
            w_inf: 0.1,
            weights: None,
            mean_vol_annual: 0.1,
        }
    }

    pub fn mkt_default() -> Self {
        MultiscaleArch {
            variant: ArchVariant::MktAffine,
            ..Self::lm_default()
        }
    }

    pub fn timescales(&self) -> Vec<f64> {
        (0..self.components)
            .map(|k| self.tau_1 * self.ratio.powi(k as i32))
            .collect()
    }

    /// Aggregation interval of each component, in ticks.
    pub fn return_horizons(&self) -> Vec<usize> {
        self.timescales()
            .iter()
            .map(|tau| ((tau / self.coupling).round() as usize).max(1))
            .collect()
    }

    /// Component weights, summing to `1 - w_inf`.
    pub fn component_weights(&self) -> Vec<f64> {
        let raw: Vec<f64> = match (&self.weights, self.variant) {
            (Some(w), _) => w.clone(),
            (None, ArchVariant::LmAffine) => {
                let taus = self.timescales();
                let top = (taus[taus.len() - 1] * std::f64::consts::E).ln();
                taus.iter().map(|t| 1.0 - t.ln() / top).collect()
            }
            (None, ArchVariant::MktAffine) => {
                // Gaussian bumps in log-timescale at one hour, one day and one week.
                let centers = [TICKS_PER_YEAR as f64 / 8760.0, 480.0, 3360.0];
                self.timescales()
                    .iter()
                    .map(|t| {
                        centers
                            .iter()
                            .map(|c| (-0.5 * ((t / c).ln() / 0.8).powi(2)).exp())
                            .sum::<f64>()
                            + 0.05
                    })
                    .collect()
            }
        };
        let total: f64 = raw.iter().sum();
        raw.iter().map(|w| w / total * (1.0 - self.w_inf)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.components < 1 {
            return bad("multiscale ARCH needs at least one component".into());
        }
        if !(self.tau_1 >= 1.0 && self.ratio >= 1.0 && self.coupling >= 1.0) {
            return bad(format!(
                "tau_1 >= 1, ratio >= 1, coupling >= 1 required (got {}, {}, {})",
                self.tau_1, self.ratio, self.coupling
            ));
        }
        if !(0.0..1.0).contains(&self.w_inf) {
            return bad(format!("w_inf must lie in [0, 1), got {}", self.w_inf));
        }
        if !(self.mean_vol_annual > 0.0 && self.mean_vol_annual.is_finite()) {
            return bad(format!("mean_vol_annual = {}", self.mean_vol_annual));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.components || w.iter().any(|v| v.is_nan() || *v < 0.0) || w.iter().sum::<f64>() <= 0.0 {
                return bad("weights must be non-negative, not all zero, one per component".into());
            }
        }
        Ok(())
    }

    pub(crate) fn returns<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let mean_var = per_tick_variance(self.mean_vol_annual);
        let weights: Vec<T> = self.component_weights().into_iter().map(T::lit).collect();
        let mu: Vec<T> = self.timescales().iter().map(|t| T::lit((-1.0 / t).exp())).collect();
        let lags = self.return_horizons();
        let inv_lag: Vec<T> = lags.iter().map(|l| T::lit(1.0 / *l as f64)).collect();
        let max_lag = *lags.iter().max().expect("at least one component");
        let floor = T::lit(self.w_inf * mean_var);

        let mut comp = vec![T::lit(mean_var); self.components];
        // history[0] is x(t - max_lag), back() is x(t)
        let mut history: VecDeque<T> = std::iter::repeat_n(T::zero(), max_lag + 1).collect();
        let mut x = T::zero();
        let mut eps = stream_rng(seed, RETURN_STREAM);
        let mut out = Vec::with_capacity(total);
        for _ in 0..total {
            let var = weights.iter().zip(&comp).fold(floor, |acc, (w, s)| acc + *w * *s);
            let r = var.sqrt() * T::standard_normal(&mut eps);
            out.push(r);
            x = x + r;
            history.pop_front();
            history.push_back(x);
            for k in 0..self.components {
                let agg = x - history[max_lag - lags[k]];
                comp[k] = mu[k] * comp[k] + (T::one() - mu[k]) * agg * agg * inv_lag[k];
            }
        }
        out
    }
}
