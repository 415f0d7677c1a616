use proptest::prelude::*;
use timerev::harness::{StatId, StatParams, StatRequest};
use timerev::stats::{
    density_asymmetry, estimate_density, graining_corr_surface, hist_real_corr_surface, vol_increments, HorizonGrid,
};
use timerev::{historical_vol, realized_vol, reverse, Series, Tick, VolSpec};

fn small_params() -> StatParams {
    StatParams {
        pdf_spec: VolSpec::new(Tick(24), Tick(1)).unwrap(),
        node_count: 11,
        pdf_bound: 1.0,
        sigma_grid: HorizonGrid::geometric(Tick(24), 2, 3).unwrap(),
        graining_horizon: Tick(32),
        grain_grid: HorizonGrid::geometric(Tick(1), 2, 6).unwrap(),
        return_dt: Tick(1),
        return_quantile: 0.95,
    }
}

fn path(steps: &[f64], start: i64) -> Series {
    let mut x = 0.0;
    let mut v = vec![x];
    for s in steps {
        x += s;
        v.push(x);
    }
    Series::new(start, v, timerev::SeriesKind::LogPrice).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<u64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.into_iter().map(f64::to_bits).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn statistics_flip_sign_under_reversal(steps in prop::collection::vec(-1e-3f64..1e-3, 300..700), start in -50i64..50) {
        let x = path(&steps, start);
        let req = StatRequest::new(StatId::ALL, small_params()).unwrap();
        let fwd = req.evaluate(&x).unwrap();
        let bwd = req.evaluate(&reverse(&x)).unwrap();
        for ((id, a), (_, b)) in fwd.iter().zip(&bwd) {
            prop_assert!((a + b).abs() <= 1e-10, "{}: {} vs {}", id, a, b);
        }
    }

    #[test]
    fn realized_is_shifted_historical(steps in prop::collection::vec(-1e-2f64..1e-2, 50..400), h in 1u64..40, g_frac in 0.0f64..1.0) {
        let x = path(&steps, 7);
        let g = 1 + ((h - 1) as f64 * g_frac) as u64;
        prop_assume!(x.len() > h as usize);
        let spec = VolSpec::new(Tick(h), Tick(g)).unwrap();
        let hv = historical_vol(&x, spec).unwrap();
        let rv = realized_vol(&x, spec).unwrap();
        prop_assert_eq!(rv.len(), hv.len());
        for t in rv.start()..=rv.end() {
            prop_assert_eq!(rv.at(t).unwrap().to_bits(), hv.at(t + h as i64).unwrap().to_bits());
        }
    }

    #[test]
    fn increments_negate_under_reversal(steps in prop::collection::vec(-1e-3f64..1e-3, 100..500), h in 2u64..30) {
        let x = path(&steps, 0);
        prop_assume!(x.len() > 2 * h as usize);
        let spec = VolSpec::new(Tick(h), Tick(1 + h / 5)).unwrap();
        let fwd = vol_increments(&x, spec).unwrap();
        let bwd = vol_increments(&reverse(&x), spec).unwrap();
        prop_assert_eq!(sorted(bwd), sorted(fwd.iter().map(|v| -v).collect()));
    }

    #[test]
    fn surfaces_transpose_under_reversal(steps in prop::collection::vec(-1e-3f64..1e-3, 200..500)) {
        let x = path(&steps, 0);
        let r = reverse(&x);
        let grid = HorizonGrid::geometric(Tick(24), 2, 3).unwrap();
        let (a, b) = (hist_real_corr_surface(&x, &grid).unwrap(), hist_real_corr_surface(&r, &grid).unwrap());
        let grains = HorizonGrid::geometric(Tick(1), 2, 5).unwrap();
        let (c, d) = (
            graining_corr_surface(&x, Tick(16), &grains).unwrap(),
            graining_corr_surface(&r, Tick(16), &grains).unwrap(),
        );
        for (s, t) in [(&a, &b), (&c, &d)] {
            for i in 0..s.size() {
                for j in 0..s.size() {
                    prop_assert_eq!(s.rho(i, j).unwrap().to_bits(), t.rho(j, i).unwrap().to_bits());
                    prop_assert_eq!(s.asym(i, j).unwrap(), -t.asym(i, j).unwrap());
                    prop_assert!(s.rho(i, j).unwrap().abs() <= 1.0);
                }
                prop_assert_eq!(s.asym(i, i).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn density_is_normalized_and_mirror_exact(samples in prop::collection::vec(-5.0f64..5.0, 110..2000), nodes in (1usize..10).prop_map(|k| 2 * k + 1)) {
        prop_assume!(samples.len() >= nodes * 10);
        let d = estimate_density(&samples, nodes).unwrap();
        prop_assert!((d.integral() - 1.0).abs() <= 1e-9);
        let g = d.grid();
        for k in 0..g.len() {
            prop_assert_eq!(g[k], -g[g.len() - 1 - k]);
            prop_assert!(d.node_density()[k] >= 0.0);
        }
        let neg: Vec<f64> = samples.iter().map(|v| -v).collect();
        let a = density_asymmetry(&d);
        let b = density_asymmetry(&estimate_density(&neg, nodes).unwrap());
        prop_assert_eq!(&a.positive_nodes, &b.positive_nodes);
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert_eq!(*x, -*y);
        }
    }
}

/// The mean volatility increment telescopes, so its ensemble magnitude
/// should fall off like 1/T.
#[test]
fn mean_increment_decays_like_inverse_length() {
    use timerev::{simulate, ProcessSpec, SimConfig};
    let spec = ProcessSpec::preset("garch11").unwrap();
    let vs = VolSpec::new(Tick(480), Tick(20)).unwrap();
    let lengths = [1usize << 12, 1 << 14, 1 << 16];
    let runs = 40;
    let points: Vec<(f64, f64)> = lengths
        .iter()
        .map(|&n| {
            let m: f64 = (0..runs)
                .map(|k| {
                    let x: Series = simulate(&spec, &SimConfig::new(n, 1000 + k)).unwrap();
                    let d = vol_increments(&x, vs).unwrap();
                    (d.iter().sum::<f64>() / d.len() as f64).abs()
                })
                .sum::<f64>()
                / runs as f64;
            ((n as f64).ln(), m.ln())
        })
        .collect();
    let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((-1.35..=-0.65).contains(&slope), "log-log slope {slope}");
}
