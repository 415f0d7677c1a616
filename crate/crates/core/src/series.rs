//! Regular tick-grid series, returns, and the historical/realized volatility
//! estimators.
//!
//! One tick is three business-time minutes. A series holds one finite value
//! per tick with no gaps; undefined head or tail samples are dropped and the
//! start index moves instead of padding.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{mirror_sum, FixedPrefix};
use crate::scalar::Scalar;

pub const TICKS_PER_HOUR: u64 = 20;
pub const TICKS_PER_DAY: u64 = 480;
pub const TICKS_PER_YEAR: u64 = 175_200;

/// Ratio between the volatility horizon and the return granularity when the
/// granularity is left unspecified.
pub const DEFAULT_HORIZON_TO_GRANULARITY: u64 = 24;

/// A duration counted in base grid intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tick(pub u64);

impl Tick {
    pub const HOUR: Tick = Tick(TICKS_PER_HOUR);
    pub const DAY: Tick = Tick(TICKS_PER_DAY);
    pub const YEAR: Tick = Tick(TICKS_PER_YEAR);

    pub fn count(self) -> u64 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn minutes(self) -> u64 {
        self.0 * 3
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t", self.0)
    }
}

impl Mul<u64> for Tick {
    type Output = Tick;
    fn mul(self, rhs: u64) -> Tick {
        Tick(self.0 * rhs)
    }
}

impl Div<u64> for Tick {
    type Output = Tick;
    fn div(self, rhs: u64) -> Tick {
        Tick(self.0 / rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    LogPrice,
    Return,
    Volatility,
}

/// Values on a uniform tick grid: sample `i` sits at tick `start + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSeries<T> {
    start: i64,
    values: Vec<T>,
    kind: SeriesKind,
}

impl<T: Scalar> RegularSeries<T> {
    pub fn new(start: i64, values: Vec<T>, kind: SeriesKind) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries("series must hold at least one value".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite value at tick {}",
                start + i as i64
            )));
        }
        if kind == SeriesKind::Volatility {
            if let Some(i) = values.iter().position(|v| *v < T::zero()) {
                return Err(Error::InvalidSeries(format!(
                    "negative volatility at tick {}",
                    start + i as i64
                )));
            }
        }
        Ok(RegularSeries { start, values, kind })
    }

    /// Log-price series starting at tick 0.
    pub fn log_prices(values: Vec<T>) -> Result<Self> {
        Self::new(0, values, SeriesKind::LogPrice)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Tick of the last sample.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn at(&self, tick: i64) -> Option<T> {
        if tick < self.start {
            return None;
        }
        self.values.get((tick - self.start) as usize).copied()
    }

    /// Negates every value (the currency-exchange map `x -> -x` on log prices).
    pub fn negated(&self) -> Self {
        RegularSeries {
            start: self.start,
            values: self.values.iter().map(|v| -*v).collect(),
            kind: self.kind,
        }
    }

    fn expect_kind(&self, kind: SeriesKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidSeries(format!(
                "expected {:?} series, got {:?}",
                kind, self.kind
            )));
        }
        Ok(())
    }
}

/// Volatility estimator parameters: the estimation horizon and the return
/// granularity inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolSpec {
    pub horizon: Tick,
    pub granularity: Tick,
}

impl VolSpec {
    pub fn new(horizon: Tick, granularity: Tick) -> Result<Self> {
        if granularity.0 == 0 {
            return Err(Error::InvalidDuration("granularity must be at least one tick".into()));
        }
        if granularity > horizon {
            return Err(Error::InvalidDuration(format!(
                "granularity {granularity} exceeds horizon {horizon}"
            )));
        }
        Ok(VolSpec { horizon, granularity })
    }

    /// Horizon with granularity `horizon / 24`.
    pub fn with_default_granularity(horizon: Tick) -> Result<Self> {
        if horizon.0 < DEFAULT_HORIZON_TO_GRANULARITY {
            return Err(Error::InvalidDuration(format!(
                "horizon {horizon} shorter than {DEFAULT_HORIZON_TO_GRANULARITY} ticks"
            )));
        }
        Self::new(horizon, horizon / DEFAULT_HORIZON_TO_GRANULARITY)
    }

    /// Number of grid points in the window sum.
    pub fn term_count(&self) -> u64 {
        self.horizon.0 - self.granularity.0 + 1
    }
}

/// `r[dt](t) = x(t) - x(t - dt)`.
pub fn returns<T: Scalar>(prices: &RegularSeries<T>, dt_r: Tick) -> Result<RegularSeries<T>> {
    prices.expect_kind(SeriesKind::LogPrice)?;
    if dt_r.0 == 0 {
        return Err(Error::InvalidDuration(
            "return interval must be at least one tick".into(),
        ));
    }
    let d = dt_r.as_usize();
    if prices.len() <= d {
        return Err(Error::SeriesTooShort {
            needed: d + 1,
            got: prices.len(),
        });
    }
    let v = prices.values();
    let out = (d..v.len()).map(|i| v[i] - v[i - d]).collect();
    Ok(RegularSeries {
        start: prices.start + d as i64,
        values: out,
        kind: SeriesKind::Return,
    })
}

/// Raw historical volatility values for ticks `start + horizon ..= end`.
pub(crate) fn historical_vol_values<T: Scalar>(prices: &[T], spec: VolSpec) -> Result<Vec<T>> {
    let h = spec.horizon.as_usize();
    let g = spec.granularity.as_usize();
    if g == 0 || g > h {
        return Err(Error::InvalidDuration(format!(
            "granularity {} must lie in 1..={}",
            spec.granularity, spec.horizon
        )));
    }
    if prices.len() <= h {
        return Err(Error::SeriesTooShort {
            needed: h + 1,
            got: prices.len(),
        });
    }
    let squared: Vec<f64> = (g..prices.len())
        .map(|i| {
            let r = (prices[i] - prices[i - g]).to_f64_exact();
            r * r
        })
        .collect();
    let prefix = FixedPrefix::new(&squared);
    let n = spec.term_count() as f64;
    let annualize = TICKS_PER_YEAR as f64 / g as f64;
    // squared[j] is the return at sample index j + g; the window of sample
    // index i covers returns at i - h + g ..= i.
    Ok((h..prices.len())
        .map(|i| {
            let sum = prefix.sum(i - h, i - g + 1);
            T::lit((annualize * (sum / n)).sqrt())
        })
        .collect())
}

/// Annualized root-mean-square of the overlapping `granularity` returns in
/// `[t - horizon, t]`, defined for `t >= start + horizon`.
pub fn historical_vol<T: Scalar>(prices: &RegularSeries<T>, spec: VolSpec) -> Result<RegularSeries<T>> {
    prices.expect_kind(SeriesKind::LogPrice)?;
    let values = historical_vol_values(prices.values(), spec)?;
    Ok(RegularSeries {
        start: prices.start + spec.horizon.0 as i64,
        values,
        kind: SeriesKind::Volatility,
    })
}

/// The same estimator over `[t, t + horizon]`, i.e. the historical volatility
/// shifted back by one horizon. Defined for `t <= end - horizon`.
pub fn realized_vol<T: Scalar>(prices: &RegularSeries<T>, spec: VolSpec) -> Result<RegularSeries<T>> {
    prices.expect_kind(SeriesKind::LogPrice)?;
    let values = historical_vol_values(prices.values(), spec)?;
    Ok(RegularSeries {
        start: prices.start,
        values,
        kind: SeriesKind::Volatility,
    })
}

/// Time reversal: the value at `start + k` moves to `end - k`.
pub fn reverse<T: Scalar>(series: &RegularSeries<T>) -> RegularSeries<T> {
    let mut values = series.values.clone();
    values.reverse();
    RegularSeries {
        start: series.start,
        values,
        kind: series.kind,
    }
}

/// Product-moment correlation.
///
/// The result is bitwise unchanged when both inputs are reversed together or
/// when `x` and `y` are swapped.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let len = T::from_usize(n).expect("length representable");
    let mx = mirror_sum(n, |i| x[i]) / len;
    let my = mirror_sum(n, |i| y[i]) / len;
    let sxx = mirror_sum(n, |i| (x[i] - mx) * (x[i] - mx));
    let syy = mirror_sum(n, |i| (y[i] - my) * (y[i] - my));
    if sxx <= T::zero() || syy <= T::zero() {
        return Err(Error::ZeroVariance);
    }
    let sxy = mirror_sum(n, |i| (x[i] - mx) * (y[i] - my));
    let rho = sxy / (sxx * syy).sqrt();
    Ok(rho.max(-T::one()).min(T::one()))
}
