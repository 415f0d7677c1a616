//! Monte Carlo ensembles: simulate independent paths, evaluate the requested
//! asymmetry statistics on each, and summarize their finite-sample
//! distributions.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{rng::sub_seed, simulate, ProcessSpec, SimConfig};
use crate::scalar::Scalar;
use crate::series::{RegularSeries, Tick, VolSpec};
use crate::stats::{
    graining_corr_surface, hist_real_corr_surface, integrated_corr_asymmetry, integrated_graining_asymmetry,
    pdf_asymmetry_statistic, return_density_asymmetry, HorizonGrid, IntegrationMode, DEFAULT_NODE_COUNT,
    DEFAULT_PDF_BOUND, DEFAULT_RETURN_QUANTILE,
};

pub const DEFAULT_RUNS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatId {
    #[serde(rename = "A_p")]
    Ap,
    #[serde(rename = "A_sigma_tot")]
    SigmaTot,
    #[serde(rename = "A_sigma_cut")]
    SigmaCut,
    #[serde(rename = "A_gr_cut")]
    GrCut,
    #[serde(rename = "return_asym")]
    ReturnAsym,
}

impl StatId {
    pub const ALL: [StatId; 5] = [
        StatId::Ap,
        StatId::SigmaTot,
        StatId::SigmaCut,
        StatId::GrCut,
        StatId::ReturnAsym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatId::Ap => "A_p",
            StatId::SigmaTot => "A_sigma_tot",
            StatId::SigmaCut => "A_sigma_cut",
            StatId::GrCut => "A_gr_cut",
            StatId::ReturnAsym => "return_asym",
        }
    }
}

impl fmt::Display for StatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown statistic '{s}'")))
    }
}

/// Grids and bounds shared by all statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatParams {
    pub pdf_spec: VolSpec,
    pub node_count: usize,
    pub pdf_bound: f64,
    pub sigma_grid: HorizonGrid,
    pub graining_horizon: Tick,
    pub grain_grid: HorizonGrid,
    pub return_dt: Tick,
    pub return_quantile: f64,
}

impl Default for StatParams {
    fn default() -> Self {
        StatParams {
            pdf_spec: VolSpec::with_default_granularity(Tick::DAY).expect("one day is a valid horizon"),
            node_count: DEFAULT_NODE_COUNT,
            pdf_bound: DEFAULT_PDF_BOUND,
            sigma_grid: HorizonGrid::hist_real_default(),
            graining_horizon: Tick(512),
            grain_grid: HorizonGrid::graining_default(),
            return_dt: Tick::DAY,
            return_quantile: DEFAULT_RETURN_QUANTILE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRequest {
    stats: Vec<StatId>,
    pub params: StatParams,
}

impl StatRequest {
    pub fn new(stats: impl IntoIterator<Item = StatId>, params: StatParams) -> Result<Self> {
        let mut stats: Vec<StatId> = stats.into_iter().collect();
        stats.sort();
        stats.dedup();
        if stats.is_empty() {
            return Err(Error::InvalidParameter("no statistic requested".into()));
        }
        Ok(StatRequest { stats, params })
    }

    pub fn all() -> Self {
        Self::new(StatId::ALL, StatParams::default()).expect("non-empty request")
    }

    pub fn stats(&self) -> &[StatId] {
        &self.stats
    }

    /// Shortest series on which every requested statistic is computable.
    pub fn required_ticks(&self) -> usize {
        let p = &self.params;
        self.stats
            .iter()
            .map(|s| match s {
                StatId::Ap => 2 * p.pdf_spec.horizon.as_usize() + p.node_count * 10,
                StatId::SigmaTot | StatId::SigmaCut => 2 * p.sigma_grid.max().as_usize() + 2,
                StatId::GrCut => 2 * p.graining_horizon.as_usize() + 2,
                StatId::ReturnAsym => p.return_dt.as_usize() + p.node_count * 10,
            })
            .max()
            .unwrap_or(0)
    }

    /// Evaluates every requested statistic on one series, in request order.
    pub fn evaluate<T: Scalar>(
        &self,
        prices: &RegularSeries<T>,
    ) -> std::result::Result<Vec<(StatId, T)>, (StatId, Error)> {
        let p = &self.params;
        let mut sigma_surface = None;
        let mut out = Vec::with_capacity(self.stats.len());
        for &id in &self.stats {
            let value = (|| -> Result<T> {
                match id {
                    StatId::Ap => pdf_asymmetry_statistic(prices, p.pdf_spec, p.node_count, T::lit(p.pdf_bound)),
                    StatId::SigmaTot | StatId::SigmaCut => {
                        if sigma_surface.is_none() {
                            sigma_surface = Some(hist_real_corr_surface(prices, &p.sigma_grid)?);
                        }
                        let mode = if id == StatId::SigmaTot {
                            IntegrationMode::Tot
                        } else {
                            IntegrationMode::Cut
                        };
                        integrated_corr_asymmetry(sigma_surface.as_ref().expect("computed above"), mode)
                    }
                    StatId::GrCut => {
                        let s = graining_corr_surface(prices, p.graining_horizon, &p.grain_grid)?;
                        integrated_graining_asymmetry(&s)
                    }
                    StatId::ReturnAsym => {
                        return_density_asymmetry(prices, p.return_dt, p.node_count, p.return_quantile)
                    }
                }
            })()
            .map_err(|e| (id, e))?;
            out.push((id, value));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnsembleOptions {
    /// Worker threads; `None` uses all available cores.
    pub workers: Option<usize>,
    /// Test hook: give every run this seed instead of a derived sub-seed.
    pub force_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub name: StatId,
    pub mean: f64,
    pub std_dev: f64,
    pub p_value: f64,
    pub samples: Vec<f64>,
}

impl StatSummary {
    pub fn from_samples(name: StatId, samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_dev = if n > 1 {
            (samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(StatSummary {
            name,
            mean,
            std_dev,
            p_value: p_value(&samples)?,
            samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub process: ProcessSpec,
    pub n_ticks: usize,
    pub burn_in: usize,
    pub master_seed: u64,
    pub run_count: usize,
    pub params: StatParams,
    pub stats: Vec<StatSummary>,
}

impl EnsembleSummary {
    pub fn get(&self, id: StatId) -> Option<&StatSummary> {
        self.stats.iter().find(|s| s.name == id)
    }
}

/// Fraction of samples lower than or equal to zero.
pub fn p_value(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(samples.iter().filter(|v| **v <= 0.0).count() as f64 / samples.len() as f64)
}

/// Fraction of the null ensemble strictly below `observed`.
pub fn empirical_percentile(observed: f64, null_samples: &[f64]) -> Result<f64> {
    if null_samples.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(null_samples.iter().filter(|v| **v < observed).count() as f64 / null_samples.len() as f64)
}

/// Runs `n_runs` independent paths of `spec` and summarizes every requested
/// statistic. Run `i` uses `sub_seed(cfg.seed, i)`; the result does not
/// depend on the worker count.
pub fn run_ensemble<T: Scalar>(
    spec: &ProcessSpec,
    cfg: &SimConfig,
    req: &StatRequest,
    n_runs: usize,
    opts: &EnsembleOptions,
) -> Result<EnsembleSummary> {
    if n_runs < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 runs, got {n_runs}")));
    }
    spec.validate()?;
    let needed = req.required_ticks();
    if cfg.n_ticks < needed {
        return Err(Error::SeriesTooShort {
            needed,
            got: cfg.n_ticks,
        });
    }

    let one_run = |run: usize| -> Result<Vec<f64>> {
        let seed = opts.force_seed.unwrap_or_else(|| sub_seed(cfg.seed, run as u64));
        let path = simulate::<T>(spec, &SimConfig { seed, ..*cfg }).map_err(|e| Error::Run {
            run,
            source: Box::new(e),
        })?;
        let values = req.evaluate(&path).map_err(|(id, e)| {
            log::warn!("run {run}: {id} failed: {e}");
            Error::Run {
                run,
                source: Box::new(Error::Statistic {
                    stat: id.name().to_string(),
                    source: Box::new(e),
                }),
            }
        })?;
        for (id, v) in &values {
            log::info!("run {run} {id} {v}");
        }
        Ok(values.into_iter().map(|(_, v)| v.to_f64_exact()).collect())
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))?;
    let rows: Vec<Vec<f64>> = pool.install(|| (0..n_runs).into_par_iter().map(one_run).collect::<Result<_>>())?;

    let stats = req
        .stats()
        .iter()
        .enumerate()
        .map(|(k, id)| StatSummary::from_samples(*id, rows.iter().map(|r| r[k]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleSummary {
        process: spec.clone(),
        n_ticks: cfg.n_ticks,
        burn_in: cfg.burn_in_for(spec),
        master_seed: cfg.seed,
        run_count: n_runs,
        params: req.params.clone(),
        stats,
    })
}
