//! Time-reversal asymmetry of financial time series.
//!
//! The crate measures whether a regularly sampled log-price series looks the
//! same when run backwards. Three volatility-based statistics are provided,
//! each of which vanishes for a time-reversal invariant process:
//!
//! * the asymmetry of the density of volatility increments
//!   `sigma_r - sigma_h` ([`stats::pdf_asymmetry_statistic`]),
//! * the antisymmetric part of the correlation between historical and
//!   realized volatilities at different horizons
//!   ([`stats::hist_real_corr_surface`]),
//! * the antisymmetric part of the same correlation across return
//!   granularities at a fixed horizon ([`stats::graining_corr_surface`]).
//!
//! [`process`] simulates random walk, ARCH, stochastic volatility and
//! regime-switching paths, and [`harness`] turns them into Monte Carlo
//! distributions and p-values for the statistics. [`io`] covers CSV series,
//! configuration files and the job runner behind the command line tool.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the type
//! aliases below fix it to `f64`.

mod error;
mod exact;
pub mod harness;
pub mod io;
pub mod process;
mod scalar;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use harness::{
    empirical_percentile, p_value, run_ensemble, EnsembleOptions, EnsembleSummary, StatId, StatParams, StatRequest,
};
pub use process::{simulate, ProcessSpec, SimConfig};
pub use series::{historical_vol, pearson, realized_vol, returns, reverse, SeriesKind, Tick, VolSpec};

pub type Series = series::RegularSeries<f64>;
pub type Series32 = series::RegularSeries<f32>;
pub type Density = stats::Density<f64>;
pub type AsymmetryCurve = stats::AsymmetryCurve<f64>;
pub type CorrelationSurface = stats::CorrelationSurface<f64>;
