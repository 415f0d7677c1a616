//! Time-reversal asymmetry statistics.
//!
//! Every statistic here flips sign under time reversal of the input series:
//! the volatility increment multiset is negated and the correlation surfaces
//! are transposed.

mod density;
mod surface;

pub use density::{
    density_asymmetry, estimate_density, integrated_pdf_asymmetry, trapezoid, AsymmetryCurve, Density,
    DEFAULT_NODE_COUNT, SAMPLES_PER_NODE,
};
pub use surface::{
    graining_corr_surface, hist_real_corr_surface, integrated_corr_asymmetry, integrated_graining_asymmetry,
    CorrelationSurface, HorizonGrid, IntegrationMode, SurfaceKind,
};

pub(crate) use density::quantile_sorted;

use crate::error::{Error, Result};
use crate::exact::mirror_sum;
use crate::scalar::Scalar;
use crate::series::{historical_vol_values, returns, RegularSeries, SeriesKind, Tick, VolSpec};

/// Upper bound of the integrated volatility-increment asymmetry.
pub const DEFAULT_PDF_BOUND: f64 = 0.06;

/// Quantile of `|r|` bounding the integrated return-density asymmetry.
pub const DEFAULT_RETURN_QUANTILE: f64 = 0.95;

/// `sigma_r(t) - sigma_h(t)` at every tick where both are defined.
pub fn vol_increments<T: Scalar>(prices: &RegularSeries<T>, spec: VolSpec) -> Result<Vec<T>> {
    if prices.kind() != SeriesKind::LogPrice {
        return Err(Error::InvalidSeries(
            "volatility increments need a log-price series".into(),
        ));
    }
    let h = spec.horizon.as_usize();
    let needed = 2 * h + 1;
    if prices.len() < needed {
        return Err(Error::SeriesTooShort {
            needed,
            got: prices.len(),
        });
    }
    let vols = historical_vol_values(prices.values(), spec)?;
    // vols[s] sits at tick start + h + s; at tick start + h + i the realized
    // value is vols[i + h] and the historical one vols[i].
    Ok((0..prices.len() - 2 * h).map(|i| vols[i + h] - vols[i]).collect())
}

/// Integrated volatility-increment asymmetry computed from prices.
pub fn pdf_asymmetry_statistic<T: Scalar>(
    prices: &RegularSeries<T>,
    spec: VolSpec,
    node_count: usize,
    bound: T,
) -> Result<T> {
    let dsigma = vol_increments(prices, spec)?;
    let density = estimate_density(&dsigma, node_count)?;
    integrated_pdf_asymmetry(&density_asymmetry(&density), bound)
}

/// Density asymmetry of standardized `dt_r` returns, averaged over the
/// positive nodes below the `quantile` level of `|r|`.
pub fn return_density_asymmetry<T: Scalar>(
    prices: &RegularSeries<T>,
    dt_r: Tick,
    node_count: usize,
    quantile: f64,
) -> Result<T> {
    if !(0.0..=1.0).contains(&quantile) || quantile == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "quantile must lie in (0, 1], got {quantile}"
        )));
    }
    let r = returns(prices, dt_r)?;
    let r = r.values();
    let needed = node_count * SAMPLES_PER_NODE;
    if r.len() < needed {
        return Err(Error::TooFewSamples { needed, got: r.len() });
    }
    let n = r.len();
    let len = T::from_usize(n).expect("length representable");
    let mean = mirror_sum(n, |i| r[i]) / len;
    let var = mirror_sum(n, |i| (r[i] - mean) * (r[i] - mean)) / (len - T::one());
    if var <= T::zero() {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    let z: Vec<T> = r.iter().map(|v| *v / sd).collect();
    let mut abs: Vec<T> = z.iter().map(|v| v.abs()).collect();
    abs.sort_by(|a, b| a.partial_cmp(b).expect("finite returns"));
    let bound = quantile_sorted(&abs, quantile);
    let density = estimate_density(&z, node_count)?;
    integrated_pdf_asymmetry(&density_asymmetry(&density), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{historical_vol, realized_vol, reverse, TICKS_PER_YEAR};

    fn series(v: Vec<f64>) -> RegularSeries<f64> {
        RegularSeries::log_prices(v).unwrap()
    }

    #[test]
    fn increments_of_constant_prices_vanish() {
        let d = vol_increments(&series(vec![2.0; 30]), VolSpec::new(Tick(5), Tick(1)).unwrap()).unwrap();
        assert_eq!(d.len(), 20);
        assert!(d.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn increment_hand_example() {
        // x = [0, a, 0, 0, 0], horizon 2, granularity 1: the only common tick
        // is t = 2. Historical window returns at t' = 1, 2 are a, -a;
        // realized window returns at t' = 3, 4 are 0, 0.
        let a = 0.01;
        let d = vol_increments(
            &series(vec![0.0, a, 0.0, 0.0, 0.0]),
            VolSpec::new(Tick(2), Tick(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(d.len(), 1);
        let sigma_h = (TICKS_PER_YEAR as f64 * (a * a + a * a) / 2.0).sqrt();
        assert!((d[0] - (0.0 - sigma_h)).abs() < 1e-14);
    }

    #[test]
    fn increments_match_vol_series() {
        let x = series((0..60).map(|i| ((i * i) % 7) as f64 * 0.001).collect());
        let spec = VolSpec::new(Tick(6), Tick(2)).unwrap();
        let d = vol_increments(&x, spec).unwrap();
        let h = historical_vol(&x, spec).unwrap();
        let r = realized_vol(&x, spec).unwrap();
        for (i, v) in d.iter().enumerate() {
            let t = 6 + i as i64;
            assert_eq!(*v, r.at(t).unwrap() - h.at(t).unwrap());
        }
    }

    #[test]
    fn too_short_for_increments() {
        let err = vol_increments(&series(vec![0.0; 10]), VolSpec::new(Tick(5), Tick(1)).unwrap()).unwrap_err();
        assert_eq!(err.kind(), "SeriesTooShort");
    }

    #[test]
    fn reversed_increments_are_negated_multiset() {
        let x = series((0..100).map(|i| ((i * 31 % 17) as f64).sqrt() * 0.002).collect());
        let spec = VolSpec::new(Tick(8), Tick(2)).unwrap();
        let d = vol_increments(&x, spec).unwrap();
        let mut dr = vol_increments(&reverse(&x), spec).unwrap();
        dr.reverse();
        for (a, b) in d.iter().zip(&dr) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn symmetric_returns_have_zero_asymmetry() {
        // increments alternate +s, -s with varying magnitude
        let mut x = vec![0.0];
        for i in 0..2000 {
            let s = 0.001 * (1.0 + (i / 2 % 13) as f64);
            let step = if i % 2 == 0 { s } else { -s };
            x.push(x.last().unwrap() + step);
        }
        let a = return_density_asymmetry(&series(x), Tick(1), 41, 0.95).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn negated_prices_negate_return_asymmetry() {
        let x: Vec<f64> = (0..3000)
            .map(|i| ((i as f64) * 0.37).sin() * 0.01 + (i as f64 * 1e-5))
            .collect();
        let s = series(x);
        let a = return_density_asymmetry(&s, Tick(3), 41, 0.95).unwrap();
        let b = return_density_asymmetry(&s.negated(), Tick(3), 41, 0.95).unwrap();
        assert_ne!(a, 0.0);
        assert_eq!(a, -b);
    }
}
