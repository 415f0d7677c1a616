//! Linear-interpolation histogram on a mirror-symmetric, equal-count grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::WeightBins;
use crate::scalar::Scalar;

pub const DEFAULT_NODE_COUNT: usize = 41;

/// Minimum number of samples per grid node.
pub const SAMPLES_PER_NODE: usize = 10;

/// Exponent of the tail refinement applied to the equal-count levels.
///
/// Level `u` maps to `1 - (1 - u)^TAIL_REFINEMENT`, which places the outer
/// nodes further into the tail than plain equal-count quantiles would and keeps
/// the interpolation bias of the shoulder nodes small.
const TAIL_REFINEMENT: f64 = 1.5;

/// Probability density sampled on a grid that is symmetric about zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Density<T> {
    grid: Vec<T>,
    node_density: Vec<T>,
    sample_count: usize,
}

impl<T: Scalar> Density<T> {
    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn node_density(&self) -> &[T] {
        &self.node_density
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// Index of the node at zero.
    pub fn center(&self) -> usize {
        self.grid.len() / 2
    }

    /// Trapezoidal integral of the node densities over the grid.
    pub fn integral(&self) -> T {
        trapezoid(&self.grid, &self.node_density)
    }
}

/// `a(g) = p(g) - p(-g)` on the positive nodes of a density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymmetryCurve<T> {
    pub positive_nodes: Vec<T>,
    pub values: Vec<T>,
}

pub fn trapezoid<T: Scalar>(x: &[T], y: &[T]) -> T {
    let half = T::lit(0.5);
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| (xs[1] - xs[0]) * (ys[0] + ys[1]) * half)
        .fold(T::zero(), |a, b| a + b)
}

/// Linear-interpolated quantile of an ascending slice.
pub(crate) fn quantile_sorted<T: Scalar>(sorted: &[T], level: f64) -> T {
    let n = sorted.len();
    let pos = level.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = T::lit(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Positive half of the grid, `0 = g_0 < g_1 < ... < g_M`.
fn positive_grid<T: Scalar>(sorted_abs: &[T], half_count: usize) -> Vec<T> {
    let mut grid = vec![T::zero()];
    for m in 1..=half_count {
        let u = m as f64 / (half_count + 1) as f64;
        let level = 1.0 - (1.0 - u).powf(TAIL_REFINEMENT);
        let q = quantile_sorted(sorted_abs, level);
        if q > *grid.last().expect("grid starts with zero") {
            grid.push(q);
        }
    }
    grid
}

/// Histogram density of `samples` on `node_count` mirrored nodes.
///
/// Node positions are quantiles of the pooled `|samples|`, mirrored about
/// zero. Each sample splits its unit mass linearly between the two nodes that
/// bracket it; samples beyond the outer node land on it. Coinciding quantiles
/// are merged, so the grid may hold fewer than `node_count` nodes when the
/// sample has ties.
pub fn estimate_density<T: Scalar>(samples: &[T], node_count: usize) -> Result<Density<T>> {
    if node_count < 3 || node_count.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "node count must be odd and at least 3, got {node_count}"
        )));
    }
    let needed = node_count * SAMPLES_PER_NODE;
    if samples.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite sample {v}")));
    }
    if samples.iter().all(|v| *v == samples[0]) {
        return Err(Error::DegenerateSamples("all samples are equal".into()));
    }

    let mut sorted_abs: Vec<T> = samples.iter().map(|v| v.abs()).collect();
    sorted_abs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let half = positive_grid(&sorted_abs, node_count / 2);
    let outer = half.len() - 1;
    if outer == 0 {
        return Err(Error::DegenerateSamples("no spread in |samples|".into()));
    }

    // Full grid index of positive node m is center + m, of -g_m is center - m.
    let center = outer;
    let mut bins = WeightBins::new(2 * outer + 1);
    let node_index = |m: usize, negative: bool| if negative { center - m } else { center + m };
    for &v in samples {
        let a = v.abs();
        let negative = v < T::zero();
        if a >= half[outer] {
            bins.unit(node_index(outer, negative));
            continue;
        }
        // half[k] <= a < half[k + 1]
        let k = half.partition_point(|g| *g <= a) - 1;
        let frac = ((a - half[k]) / (half[k + 1] - half[k])).to_f64_exact();
        bins.split(node_index(k, negative), node_index(k + 1, negative), frac);
    }

    // Trapezoid weight of each positive node: half the span of its neighbours.
    let half_width = |m: usize| -> T {
        let two = T::lit(2.0);
        if m == 0 {
            half[1]
        } else if m == outer {
            (half[outer] - half[outer - 1]) / two
        } else {
            (half[m + 1] - half[m - 1]) / two
        }
    };

    let n = T::from_usize(samples.len()).expect("sample count representable");
    let mut grid = Vec::with_capacity(2 * outer + 1);
    let mut node_density = Vec::with_capacity(2 * outer + 1);
    for idx in 0..=2 * outer {
        let (m, negative) = if idx < center {
            (center - idx, true)
        } else {
            (idx - center, false)
        };
        let g = half[m];
        grid.push(if negative { -g } else { g });
        node_density.push(T::lit(bins.get(idx)) / (n * half_width(m)));
    }
    Ok(Density {
        grid,
        node_density,
        sample_count: samples.len(),
    })
}

pub fn density_asymmetry<T: Scalar>(d: &Density<T>) -> AsymmetryCurve<T> {
    let c = d.center();
    let k = d.grid.len() - 1 - c;
    let positive_nodes = (1..=k).map(|m| d.grid[c + m]).collect();
    let values = (1..=k).map(|m| d.node_density[c + m] - d.node_density[c - m]).collect();
    AsymmetryCurve { positive_nodes, values }
}

/// Mean of the asymmetry over the nodes strictly inside `(0, bound)`.
pub fn integrated_pdf_asymmetry<T: Scalar>(curve: &AsymmetryCurve<T>, bound: T) -> Result<T> {
    let mut sum = T::zero();
    let mut count = 0usize;
    for (g, a) in curve.positive_nodes.iter().zip(&curve.values) {
        if *g > T::zero() && *g < bound {
            sum = sum + *a;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::NoNodesInRange {
            bound: bound.to_f64_exact(),
        });
    }
    Ok(sum / T::from_usize(count).expect("count representable"))
}
