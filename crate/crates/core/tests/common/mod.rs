//! Deliberately naive re-implementations used as oracles: plain loops over
//! the defining sums, no prefix sums, no compensation, no shared code.
#![allow(dead_code)]

pub const YEAR: f64 = 175_200.0;

pub fn naive_returns(x: &[f64], dt: usize) -> Vec<f64> {
    (dt..x.len()).map(|t| x[t] - x[t - dt]).collect()
}

/// Historical volatility at every index `t >= h`, as `(t, value)`.
pub fn naive_hist_vol(x: &[f64], h: usize, g: usize) -> Vec<(usize, f64)> {
    let n = (h - g + 1) as f64;
    (h..x.len())
        .map(|t| {
            let mut s = 0.0;
            for tp in (t + g - h)..=t {
                let r = x[tp] - x[tp - g];
                s += r * r;
            }
            (t, (YEAR / g as f64 * s / n).sqrt())
        })
        .collect()
}

fn hist_at(x: &[f64], h: usize, g: usize, t: usize) -> f64 {
    let n = (h - g + 1) as f64;
    let mut s = 0.0;
    for tp in (t + g - h)..=t {
        let r = x[tp] - x[tp - g];
        s += r * r;
    }
    (YEAR / g as f64 * s / n).sqrt()
}

/// Realized volatility at every index `t` with `t + h < len`.
pub fn naive_real_vol(x: &[f64], h: usize, g: usize) -> Vec<(usize, f64)> {
    (0..x.len().saturating_sub(h))
        .map(|t| (t, hist_at(x, h, g, t + h)))
        .collect()
}

pub fn naive_increments(x: &[f64], h: usize, g: usize) -> Vec<f64> {
    (h..x.len() - h)
        .map(|t| hist_at(x, h, g, t + h) - hist_at(x, h, g, t))
        .collect()
}

pub fn naive_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// Correlation of `sigma_h[h1, g1](t)` with `sigma_r[h2, g2](t)` over every
/// index where both exist.
pub fn naive_cell(x: &[f64], (h1, g1): (usize, usize), (h2, g2): (usize, usize)) -> f64 {
    let ts: Vec<usize> = (h1..x.len()).filter(|t| t + h2 < x.len()).collect();
    let a: Vec<f64> = ts.iter().map(|&t| hist_at(x, h1, g1, t)).collect();
    let b: Vec<f64> = ts.iter().map(|&t| hist_at(x, h2, g2, t + h2)).collect();
    naive_pearson(&a, &b)
}

/// Random-walk path with slowly varying volatility, from a tiny LCG so the
/// oracle shares no code with the simulators.
pub fn lcg_path(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let mut x = 0.0;
    let mut vol = 1e-3;
    (0..n)
        .map(|i| {
            if i > 0 {
                vol = (vol * (1.0 + 0.2 * next())).clamp(2e-4, 5e-3);
                x += vol * next();
            }
            x
        })
        .collect()
}
