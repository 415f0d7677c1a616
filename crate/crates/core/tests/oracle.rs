mod common;

use common::*;
use timerev::stats::{graining_corr_surface, hist_real_corr_surface, vol_increments, HorizonGrid};
use timerev::{historical_vol, realized_vol, returns, Series, Tick, VolSpec};

const TOL: f64 = 1e-12;

fn close(a: f64, b: f64, what: &str) {
    assert!((a - b).abs() <= TOL, "{what}: {a} vs {b}");
}

fn paths() -> Vec<Vec<f64>> {
    vec![lcg_path(500, 1), lcg_path(431, 2), lcg_path(256, 3)]
}

#[test]
fn returns_match() {
    for x in paths() {
        let s = Series::log_prices(x.clone()).unwrap();
        for dt in [1, 3, 20, 100] {
            let r = returns(&s, Tick(dt as u64)).unwrap();
            let naive = naive_returns(&x, dt);
            assert_eq!(r.len(), naive.len());
            assert_eq!(r.start(), dt as i64);
            for (a, b) in r.values().iter().zip(&naive) {
                close(*a, *b, "return");
            }
        }
    }
}

#[test]
fn volatilities_match() {
    for x in paths() {
        let s = Series::log_prices(x.clone()).unwrap();
        for (h, g) in [(24, 1), (48, 2), (96, 4), (10, 10), (60, 7)] {
            let spec = VolSpec::new(Tick(h as u64), Tick(g as u64)).unwrap();
            let hv = historical_vol(&s, spec).unwrap();
            let naive = naive_hist_vol(&x, h, g);
            assert_eq!(hv.len(), naive.len());
            for (k, (t, v)) in naive.iter().enumerate() {
                assert_eq!(hv.start() + k as i64, *t as i64);
                close(hv.values()[k], *v, "historical vol");
            }
            let rv = realized_vol(&s, spec).unwrap();
            let naive = naive_real_vol(&x, h, g);
            assert_eq!(rv.len(), naive.len());
            for (k, (t, v)) in naive.iter().enumerate() {
                assert_eq!(rv.start() + k as i64, *t as i64);
                close(rv.values()[k], *v, "realized vol");
            }
        }
    }
}

#[test]
fn increments_match() {
    for x in paths() {
        let s = Series::log_prices(x.clone()).unwrap();
        for (h, g) in [(24, 1), (48, 2), (100, 5)] {
            let d = vol_increments(&s, VolSpec::new(Tick(h as u64), Tick(g as u64)).unwrap()).unwrap();
            let naive = naive_increments(&x, h, g);
            assert_eq!(d.len(), naive.len());
            for (a, b) in d.iter().zip(&naive) {
                close(*a, *b, "increment");
            }
        }
    }
}

#[test]
fn every_hist_real_cell_matches() {
    let grid = HorizonGrid::geometric(Tick(24), 2, 4).unwrap();
    let x = lcg_path(500, 9);
    let s = Series::log_prices(x.clone()).unwrap();
    let surface = hist_real_corr_surface(&s, &grid).unwrap();
    let h: Vec<usize> = grid.horizons().iter().map(|t| t.as_usize()).collect();
    for i in 0..h.len() {
        for j in 0..h.len() {
            let naive = naive_cell(&x, (h[i], h[i] / 24), (h[j], h[j] / 24));
            close(surface.rho(i, j).unwrap(), naive, &format!("rho[{i}][{j}]"));
            let naive_t = naive_cell(&x, (h[j], h[j] / 24), (h[i], h[i] / 24));
            close(surface.asym(i, j).unwrap(), naive - naive_t, &format!("asym[{i}][{j}]"));
        }
    }
}

#[test]
fn every_graining_cell_matches() {
    let grains = HorizonGrid::geometric(Tick(1), 2, 7).unwrap();
    for seed in [4, 5] {
        let x = lcg_path(400, seed);
        let s = Series::log_prices(x.clone()).unwrap();
        let horizon = 64;
        let surface = graining_corr_surface(&s, Tick(horizon as u64), &grains).unwrap();
        let g: Vec<usize> = grains.horizons().iter().map(|t| t.as_usize()).collect();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let naive = naive_cell(&x, (horizon, g[i]), (horizon, g[j]));
                close(surface.rho(i, j).unwrap(), naive, &format!("rho_gr[{i}][{j}]"));
            }
        }
    }
}
