//! Markov regime-switching volatility.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, VOL_STREAM};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{TICKS_PER_DAY, TICKS_PER_YEAR};

/// Returns follow a random walk whose annualized volatility is
/// `state_vols[i(t)]`, where `i(t)` is a Markov chain with per-tick transition
/// matrix `transition[i][j] = Pr(i -> j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeSwitching {
    pub state_vols: Vec<f64>,
    pub transition: Vec<Vec<f64>>,
}

impl Default for RegimeSwitching {
    /// Quiet, excited and shocked states. Upward moves are direct jumps, the
    /// way down goes one state at a time.
    fn default() -> Self {
        let day = TICKS_PER_DAY as f64;
        let quiet_to_excited = 1.0 / (20.0 * day);
        let quiet_to_shocked = 1.0 / (20.0 * day);
        let excited_to_quiet = 1.0 / (4.0 * day);
        let excited_to_shocked = 1.0 / (40.0 * day);
        let shocked_to_excited = 1.0 / (1.5 * day);
        RegimeSwitching {
            state_vols: vec![0.05, 0.10, 0.25],
            transition: vec![
                vec![
                    1.0 - quiet_to_excited - quiet_to_shocked,
                    quiet_to_excited,
                    quiet_to_shocked,
                ],
                vec![
                    excited_to_quiet,
                    1.0 - excited_to_quiet - excited_to_shocked,
                    excited_to_shocked,
                ],
                vec![0.0, shocked_to_excited, 1.0 - shocked_to_excited],
            ],
        }
    }
}

impl RegimeSwitching {
    pub fn states(&self) -> usize {
        self.state_vols.len()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn validate(&self) -> Result<()> {
        let n = self.states();
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if n == 0 {
            return bad("regime switching needs at least one state".into());
        }
        if self.state_vols.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return bad("state volatilities must be positive".into());
        }
        if self.transition.len() != n || self.transition.iter().any(|row| row.len() != n) {
            return bad(format!("transition matrix must be {n} x {n}"));
        }
        for (i, row) in self.transition.iter().enumerate() {
            if row.iter().any(|p| !(*p >= 0.0 && *p <= 1.0)) {
                return bad(format!("row {i} has an entry outside [0, 1]"));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return bad(format!("row {i} sums to {total}"));
            }
        }
        // Every state must reach every other: forward and backward closure from 0.
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let p = if forward {
                        self.transition[i][j]
                    } else {
                        self.transition[j][i]
                    };
                    if p > 0.0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.iter().all(|s| *s)
        };
        if !(reach(true) && reach(false)) {
            return bad("transition matrix is not irreducible (unreachable states)".into());
        }
        Ok(())
    }

    /// Solves `pi P = pi`, `sum pi = 1` by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn stationary_distribution(&self) -> Vec<f64> {
        let n = self.states();
        // Rows 0..n-1 of (P^T - I), last row replaced by the normalization.
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = self.transition[j][i] - if i == j { 1.0 } else { 0.0 };
            }
        }
        a[n - 1] = vec![1.0; n + 1];
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("finite"))
                .expect("non-empty");
            a.swap(col, pivot);
            let p = a[col][col];
            for c in col..=n {
                a[col][c] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r][col];
                    if f != 0.0 {
                        for c in col..=n {
                            a[r][c] -= f * a[col][c];
                        }
                    }
                }
            }
        }
        a.iter().map(|row| row[n]).collect()
    }

    /// Longest expected dwell time of any state, in ticks.
    pub fn longest_dwell(&self) -> f64 {
        self.transition
            .iter()
            .enumerate()
            .map(|(i, row)| 1.0 / (1.0 - row[i]).max(1e-300))
            .fold(0.0, f64::max)
    }

    pub(crate) fn state_path(&self, total: usize, seed: u64) -> Vec<usize> {
        let mut rng = stream_rng(seed, VOL_STREAM);
        let cumulative: Vec<Vec<f64>> = self
            .transition
            .iter()
            .map(|row| {
                row.iter()
                    .scan(0.0, |acc, p| {
                        *acc += p;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        let pick = |cum: &[f64], u: f64| cum.iter().position(|c| u < *c).unwrap_or(cum.len() - 1);
        let initial: Vec<f64> = self
            .stationary_distribution()
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let mut state = pick(&initial, rng.random::<f64>());
        (0..total)
            .map(|_| {
                state = pick(&cumulative[state], rng.random::<f64>());
                state
            })
            .collect()
    }

    pub(crate) fn vol_path<T: Scalar>(&self, total: usize, seed: u64) -> Vec<T> {
        let per_tick: Vec<T> = self
            .state_vols
            .iter()
            .map(|v| T::lit(v / (TICKS_PER_YEAR as f64).sqrt()))
            .collect();
        self.state_path(total, seed).into_iter().map(|s| per_tick[s]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_asymmetric() {
        let rs = RegimeSwitching::default();
        rs.validate().unwrap();
        assert!(rs.transition[0][2] > rs.transition[2][0]);
        let pi = rs.stationary_distribution();
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pi[0] > pi[1] && pi[0] > pi[2]);
    }

    #[test]
    fn stationary_distribution_two_states() {
        let rs = RegimeSwitching {
            state_vols: vec![0.1, 0.2],
            transition: vec![vec![0.9, 0.1], vec![0.3, 0.7]],
        };
        let pi = rs.stationary_distribution();
        assert!((pi[0] - 0.75).abs() < 1e-12);
        assert!((pi[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_matrices() {
        let mut rs = RegimeSwitching::default();
        rs.transition[0][0] += 0.01;
        assert!(rs.validate().is_err());
        let absorbing = RegimeSwitching {
            state_vols: vec![0.1, 0.2],
            transition: vec![vec![0.5, 0.5], vec![0.0, 1.0]],
        };
        assert!(absorbing.validate().is_err());
        let negative_vol = RegimeSwitching {
            state_vols: vec![-0.1],
            transition: vec![vec![1.0]],
        };
        assert!(negative_vol.validate().is_err());
    }

    #[test]
    fn single_state_is_constant_vol() {
        let rs = RegimeSwitching {
            state_vols: vec![0.1],
            transition: vec![vec![1.0]],
        };
        rs.validate().unwrap();
        let v: Vec<f64> = rs.vol_path(100, 1);
        assert!(v.iter().all(|x| *x == v[0]));
    }
}
