//! Order-insensitive summation.
//!
//! The asymmetry statistics must change sign exactly when a series is
//! reversed. Reversal re-labels the same squared returns and histogram
//! weights in the opposite order, so every accumulator here produces a
//! result that does not depend on the order of its terms.

use crate::scalar::Scalar;

/// Prefix sums of non-negative reals held in 128-bit fixed point.
///
/// Window sums are exact integer differences, so two windows holding the same
/// multiset of values give bitwise-identical results.
#[derive(Debug, Clone)]
pub(crate) struct FixedPrefix {
    prefix: Vec<i128>,
    inv_scale: f64,
}

const FIXED_HEADROOM_BITS: i32 = 120;
const WEIGHT_BITS: i32 = 62;

impl FixedPrefix {
    pub(crate) fn new(values: &[f64]) -> Self {
        let max = values.iter().copied().fold(0.0_f64, f64::max);
        let exp = if max > 0.0 {
            let magnitude = max.log2().ceil() + ((values.len().max(1)) as f64).log2().ceil();
            (FIXED_HEADROOM_BITS - magnitude as i32).clamp(-1000, 1000)
        } else {
            0
        };
        let scale = 2.0_f64.powi(exp);
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc: i128 = 0;
        prefix.push(acc);
        for &v in values {
            acc += (v * scale).round() as i128;
            prefix.push(acc);
        }
        FixedPrefix {
            prefix,
            inv_scale: 2.0_f64.powi(-exp),
        }
    }

    /// Sum of `values[lo..hi]`.
    pub(crate) fn sum(&self, lo: usize, hi: usize) -> f64 {
        (self.prefix[hi] - self.prefix[lo]) as f64 * self.inv_scale
    }
}

/// Accumulates weights in `[0, 1]` as exact fixed-point integers.
#[derive(Debug, Clone, Default)]
pub(crate) struct WeightBins {
    bins: Vec<i128>,
}

impl WeightBins {
    pub(crate) fn new(len: usize) -> Self {
        WeightBins { bins: vec![0; len] }
    }

    /// Splits one unit of mass: `1 - frac` to `lower`, `frac` to `upper`.
    pub(crate) fn split(&mut self, lower: usize, upper: usize, frac: f64) {
        let one: i128 = 1 << WEIGHT_BITS;
        let hi = ((frac * one as f64).round() as i128).clamp(0, one);
        self.bins[lower] += one - hi;
        self.bins[upper] += hi;
    }

    pub(crate) fn unit(&mut self, idx: usize) {
        self.bins[idx] += 1 << WEIGHT_BITS;
    }

    pub(crate) fn get(&self, idx: usize) -> f64 {
        self.bins[idx] as f64 / (1_i128 << WEIGHT_BITS) as f64
    }
}

/// Compensated sum of `term(0) .. term(n-1)` that is bitwise invariant when the
/// index order is reversed.
///
/// Terms are paired from both ends (`term(i) + term(n-1-i)`), which is
/// commutative, and the pairs are accumulated in a fixed order.
pub(crate) fn mirror_sum<T: Scalar>(n: usize, term: impl Fn(usize) -> T) -> T {
    let half = n / 2;
    let mut sum = T::zero();
    let mut comp = T::zero();
    let mut add = |v: T| {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    };
    for i in 0..half {
        add(term(i) + term(n - 1 - i));
    }
    if n % 2 == 1 {
        add(term(half));
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_prefix_window_sums_match_naive() {
        let v: Vec<f64> = (0..100).map(|i| ((i * 37 % 17) as f64) * 1e-7).collect();
        let p = FixedPrefix::new(&v);
        for (lo, hi) in [(0, 100), (3, 9), (50, 51), (10, 10)] {
            let naive: f64 = v[lo..hi].iter().sum();
            assert!((p.sum(lo, hi) - naive).abs() <= 1e-18 + naive * 1e-14);
        }
    }

    #[test]
    fn fixed_prefix_is_order_insensitive() {
        let v: Vec<f64> = (0..64).map(|i| 1.0 / (1.0 + i as f64).powi(3)).collect();
        let mut r = v.clone();
        r.reverse();
        let a = FixedPrefix::new(&v);
        let b = FixedPrefix::new(&r);
        assert_eq!(a.sum(5, 40).to_bits(), b.sum(64 - 40, 64 - 5).to_bits());
    }

    #[test]
    fn all_zero_prefix() {
        let p = FixedPrefix::new(&[0.0; 4]);
        assert_eq!(p.sum(0, 4), 0.0);
    }

    #[test]
    fn mirror_sum_reversal_is_bitwise() {
        let v: Vec<f64> = (0..1001).map(|i| (i as f64 * 0.7).sin() * 1e3 + 0.1).collect();
        let fwd = mirror_sum(v.len(), |i| v[i]);
        let bwd = mirror_sum(v.len(), |i| v[v.len() - 1 - i]);
        assert_eq!(fwd.to_bits(), bwd.to_bits());
        let naive: f64 = v.iter().sum();
        assert!((fwd - naive).abs() < 1e-9);
    }

    #[test]
    fn weight_bins_conserve_mass() {
        let mut w = WeightBins::new(2);
        w.split(0, 1, 0.3);
        w.split(0, 1, 0.7);
        assert_eq!(w.get(0) + w.get(1), 2.0);
        assert_eq!(w.get(0), 1.0);
    }
}
