//! Correlation surfaces between past and future volatilities and their
//! antisymmetric parts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{historical_vol_values, pearson, RegularSeries, SeriesKind, Tick, VolSpec};

/// Geometric ladder of horizons. Pairing `k <-> K-1-k` mirrors the ladder in
/// log scale, so every cut pair has the same product of horizons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonGrid {
    horizons: Vec<Tick>,
}

impl HorizonGrid {
    pub fn geometric(first: Tick, ratio: u64, count: usize) -> Result<Self> {
        if first.0 == 0 || ratio < 2 || count < 2 {
            return Err(Error::InvalidParameter(format!(
                "geometric grid needs first >= 1, ratio >= 2, count >= 2 (got {first}, {ratio}, {count})"
            )));
        }
        let mut horizons = Vec::with_capacity(count);
        let mut h = first.0;
        for _ in 0..count {
            horizons.push(Tick(h));
            h = h
                .checked_mul(ratio)
                .ok_or_else(|| Error::InvalidParameter("grid overflow".into()))?;
        }
        Ok(HorizonGrid { horizons })
    }

    /// Volatility horizons for the historical/realized surface: 24 ticks
    /// doubling up to 24 * 2^10 ticks (about 51 days).
    pub fn hist_real_default() -> Self {
        Self::geometric(Tick(24), 2, 11).expect("valid default grid")
    }

    /// Granularities `2^n` ticks for `n = 0..=8`.
    pub fn graining_default() -> Self {
        Self::geometric(Tick(1), 2, 9).expect("valid default grid")
    }

    pub fn horizons(&self) -> &[Tick] {
        &self.horizons
    }

    pub fn len(&self) -> usize {
        self.horizons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.horizons.is_empty()
    }

    pub fn mirror(&self, k: usize) -> usize {
        self.horizons.len() - 1 - k
    }

    /// `(k, mirror(k))` for every `k` whose horizon exceeds its mirror's.
    pub fn cut_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&k| self.horizons[k] > self.horizons[self.mirror(k)])
            .map(|k| (k, self.mirror(k)))
            .collect()
    }

    pub fn max(&self) -> Tick {
        *self.horizons.last().expect("non-empty grid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    HistReal,
    Graining,
}

/// `rho[i][j]` correlates the historical volatility of row parameter `i` with
/// the realized volatility of column parameter `j`. Cells whose inputs have
/// zero variance are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSurface<T> {
    pub grid: HorizonGrid,
    pub kind: SurfaceKind,
    /// Estimation horizon shared by all cells of a graining surface.
    pub horizon: Option<Tick>,
    rho: Vec<Option<T>>,
    asym: Vec<Option<T>>,
}

impl<T: Scalar> CorrelationSurface<T> {
    fn from_rho(grid: HorizonGrid, kind: SurfaceKind, horizon: Option<Tick>, rho: Vec<Option<T>>) -> Self {
        let k = grid.len();
        let mut asym = vec![None; k * k];
        for i in 0..k {
            for j in 0..k {
                asym[i * k + j] = match (rho[i * k + j], rho[j * k + i]) {
                    (Some(a), Some(b)) => Some(a - b),
                    _ => None,
                };
            }
        }
        CorrelationSurface {
            grid,
            kind,
            horizon,
            rho,
            asym,
        }
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn rho(&self, i: usize, j: usize) -> Option<T> {
        self.rho[i * self.size() + j]
    }

    pub fn asym(&self, i: usize, j: usize) -> Option<T> {
        self.asym[i * self.size() + j]
    }

    fn asym_required(&self, i: usize, j: usize) -> Result<T> {
        self.asym(i, j).ok_or(Error::IncompleteSurface { row: i, col: j })
    }

    /// Asymmetry along the log-mirror cut: `(hist horizon, real horizon, a)`.
    pub fn cut(&self) -> Vec<(Tick, Tick, Option<T>)> {
        let h = self.grid.horizons();
        self.grid
            .cut_pairs()
            .into_iter()
            .map(|(i, j)| (h[i], h[j], self.asym(i, j)))
            .collect()
    }
}

/// Correlation of `x[0..m]` against `y[offset..offset + m]`; `None` on zero variance.
fn shifted_cell<T: Scalar>(x: &[T], y: &[T], offset: usize, m: usize) -> Result<Option<T>> {
    match pearson(&x[..m], &y[offset..offset + m]) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroVariance) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_prices<T: Scalar>(prices: &RegularSeries<T>) -> Result<()> {
    if prices.kind() != SeriesKind::LogPrice {
        return Err(Error::InvalidSeries(
            "correlation surfaces need a log-price series".into(),
        ));
    }
    Ok(())
}

/// Historical/realized volatility correlation surface.
///
/// Cell `(i, j)` correlates `sigma_h[h_i, h_i/24](t)` with
/// `sigma_r[h_j, h_j/24](t)` over every tick where both are defined.
pub fn hist_real_corr_surface<T: Scalar>(
    prices: &RegularSeries<T>,
    grid: &HorizonGrid,
) -> Result<CorrelationSurface<T>> {
    check_prices(prices)?;
    let hs = grid.horizons();
    let specs = hs
        .iter()
        .map(|h| VolSpec::with_default_granularity(*h))
        .collect::<Result<Vec<_>>>()?;
    let len = prices.len();
    let needed = 2 * grid.max().as_usize() + 2;
    if len < needed {
        return Err(Error::SeriesTooShort { needed, got: len });
    }
    // vols[k][s] is sigma_h[h_k] at tick start + h_k + s.
    let vols = specs
        .par_iter()
        .map(|s| historical_vol_values(prices.values(), *s))
        .collect::<Result<Vec<_>>>()?;
    let k = grid.len();
    let rho = (0..k * k)
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / k, cell % k);
            let (hi, hj) = (hs[i].as_usize(), hs[j].as_usize());
            // Common ticks t - start in [h_i, len - 1 - h_j]; sigma_r[h_j](t)
            // is sigma_h[h_j](t + h_j), stored at offset t - start.
            let m = len - hi - hj;
            shifted_cell(&vols[i], &vols[j], hi, m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSurface::from_rho(
        grid.clone(),
        SurfaceKind::HistReal,
        None,
        rho,
    ))
}

/// Volatility graining surface at a fixed horizon.
///
/// Cell `(i, j)` correlates `sigma_h[horizon, g_i](t)` with
/// `sigma_r[horizon, g_j](t)`.
pub fn graining_corr_surface<T: Scalar>(
    prices: &RegularSeries<T>,
    horizon: Tick,
    grains: &HorizonGrid,
) -> Result<CorrelationSurface<T>> {
    check_prices(prices)?;
    if let Some(g) = grains.horizons().iter().find(|g| **g > horizon) {
        return Err(Error::InvalidDuration(format!(
            "granularity {g} exceeds horizon {horizon}"
        )));
    }
    let h = horizon.as_usize();
    let len = prices.len();
    let needed = 2 * h + 2;
    if len < needed {
        return Err(Error::SeriesTooShort { needed, got: len });
    }
    let vols = grains
        .horizons()
        .par_iter()
        .map(|g| historical_vol_values(prices.values(), VolSpec::new(horizon, *g)?))
        .collect::<Result<Vec<_>>>()?;
    let k = grains.len();
    let m = len - 2 * h;
    let rho = (0..k * k)
        .into_par_iter()
        .map(|cell| shifted_cell(&vols[cell / k], &vols[cell % k], h, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSurface::from_rho(
        grains.clone(),
        SurfaceKind::Graining,
        Some(horizon),
        rho,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMode {
    /// Whole triangle where the historical horizon exceeds the realized one.
    Tot,
    /// Log-mirror cut.
    Cut,
}

/// Integrated asymmetry of a surface as a uniform mean over grid cells.
///
/// Both modes average `asym[i][j]` over cells with `h_i > h_j` (long
/// historical horizon against short realized horizon): `Tot` over the whole
/// triangle, `Cut` over the mirror pairs only.
pub fn integrated_corr_asymmetry<T: Scalar>(surface: &CorrelationSurface<T>, mode: IntegrationMode) -> Result<T> {
    let cells: Vec<(usize, usize)> = match mode {
        IntegrationMode::Cut => surface.grid.cut_pairs(),
        IntegrationMode::Tot => {
            let h = surface.grid.horizons();
            (0..surface.size())
                .flat_map(|i| (0..surface.size()).map(move |j| (i, j)))
                .filter(|&(i, j)| h[i] > h[j])
                .collect()
        }
    };
    if cells.is_empty() {
        return Err(Error::InvalidParameter("surface has no cells to integrate".into()));
    }
    let mut sum = T::zero();
    for &(i, j) in &cells {
        sum = sum + surface.asym_required(i, j)?;
    }
    Ok(sum / T::from_usize(cells.len()).expect("cell count representable"))
}

/// Mean graining asymmetry along the cut `n <-> K-1-n` with coarse
/// historical granularity.
pub fn integrated_graining_asymmetry<T: Scalar>(surface: &CorrelationSurface<T>) -> Result<T> {
    integrated_corr_asymmetry(surface, IntegrationMode::Cut)
}
