use timerev::io::{load_series_csv, save_series_csv};
use timerev::process::{ProcessSpec, SimConfig, PRESET_NAMES};
use timerev::series::TICKS_PER_YEAR;
use timerev::{simulate, Series};

#[test]
fn long_simulated_file_round_trips_bit_exactly() {
    // 11.5 years of ticks plus one extra day.
    let n = 2_018_400;
    assert!(n > 11 * TICKS_PER_YEAR as usize);
    let spec = ProcessSpec::preset("lm_arch").unwrap();
    let x: Series = simulate(&spec, &SimConfig::new(n, 99)).unwrap();
    assert_eq!(x.len(), n);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("long.csv");
    save_series_csv(&x, &path, &["lm_arch, seed 99".to_string()]).unwrap();
    let y: Series = load_series_csv(&path).unwrap();

    assert_eq!(y.len(), n);
    assert_eq!(y.start(), x.start());
    assert!(x
        .values()
        .iter()
        .zip(y.values())
        .all(|(a, b)| a.to_bits() == b.to_bits()));
}

/// Mean and batch-means standard error (50 batches, robust to volatility clustering).
fn batch_mean(v: &[f64]) -> (f64, f64) {
    let nb = 50;
    let len = v.len() / nb;
    let means: Vec<f64> = v
        .chunks_exact(len)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    let m = means.iter().sum::<f64>() / nb as f64;
    let var = means.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (nb - 1) as f64;
    (m, (var / nb as f64).sqrt())
}

#[test]
fn halves_of_a_path_agree_within_three_standard_errors() {
    for name in PRESET_NAMES {
        let spec = ProcessSpec::preset(name).unwrap();
        let x: Series = simulate(&spec, &SimConfig::new(1_000_000, 3)).unwrap();
        let r: Vec<f64> = x.values().windows(2).map(|w| w[1] - w[0]).collect();
        let sq: Vec<f64> = r.iter().map(|a| a * a).collect();
        let half = r.len() / 2;
        for (what, v) in [("mean", &r), ("variance", &sq)] {
            let (m1, e1) = batch_mean(&v[..half]);
            let (m2, e2) = batch_mean(&v[half..]);
            let z = (m1 - m2).abs() / (e1 * e1 + e2 * e2).sqrt();
            assert!(z < 3.0, "{name}: {what} differs by {z:.2} standard errors");
        }
    }
}
