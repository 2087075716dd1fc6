use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Solver settings for the batch learner and its warm start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnConfig {
    /// Total structural nonzero budget `K` for the whole coefficient matrix.
    pub budget: usize,
    /// Warm-start iterations `T` (block OMP / dictionary fit alternations).
    pub init_iters: usize,
    /// Inner-row refinement depth `N1`: SVD/reselect rounds per row visit.
    pub inner_sweeps: usize,
    /// Amplitude-adjustment alternations `N2` per outer iteration.
    pub amplitude_iters: usize,
    /// Stop once an outer iteration lowers the objective by at most this.
    pub epsilon: f64,
    /// Run inter-row switching when the inner phase lowered the objective by
    /// less than this (absolute squared-error units).
    pub trigger: f64,
    /// Fraction of the `n(n−1)/2` row pairs visited per inter-row phase.
    /// `None` picks all pairs for `n ≤ 64` and about `2n` pairs above.
    pub pair_fraction: Option<f64>,
    pub seed: u64,
    pub max_outer: usize,
}

impl LearnConfig {
    pub const DEFAULT_INIT_ITERS: usize = 80;
    pub const DEFAULT_INNER_SWEEPS: usize = 3;
    pub const DEFAULT_AMPLITUDE_ITERS: usize = 10;
    pub const DEFAULT_TRIGGER: f64 = 0.05;
    pub const DEFAULT_MAX_OUTER: usize = 20;
    pub const DEFAULT_EPSILON: f64 = 1e-6;

    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget,
            init_iters: Self::DEFAULT_INIT_ITERS,
            inner_sweeps: Self::DEFAULT_INNER_SWEEPS,
            amplitude_iters: Self::DEFAULT_AMPLITUDE_ITERS,
            epsilon: Self::DEFAULT_EPSILON,
            trigger: Self::DEFAULT_TRIGGER,
            pair_fraction: None,
            seed: 0,
            max_outer: Self::DEFAULT_MAX_OUTER,
        }
    }

    /// Checks the settings against an `n`-atom, `p`-sample problem.
    pub fn validate(&self, n: usize, p: usize) -> Result<()> {
        if self.budget == 0 || self.budget > n * p {
            return Err(Error::invalid(format!(
                "budget {} must lie in 1..={} (n = {n}, p = {p})",
                self.budget,
                n * p
            )));
        }
        for (name, v) in [
            ("init_iters", self.init_iters),
            ("inner_sweeps", self.inner_sweeps),
            ("amplitude_iters", self.amplitude_iters),
            ("max_outer", self.max_outer),
        ] {
            if v == 0 {
                return Err(Error::invalid(format!("{name} must be at least 1")));
            }
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon must be a finite value >= 0"));
        }
        if !(self.trigger >= 0.0) || !self.trigger.is_finite() {
            return Err(Error::invalid("trigger must be a finite value >= 0"));
        }
        if let Some(f) = self.pair_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid("pair_fraction must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn effective_pair_fraction(&self, n: usize) -> f64 {
        match self.pair_fraction {
            Some(f) => f,
            None if n <= 64 => 1.0,
            None => 4.0 / (n as f64 - 1.0),
        }
    }

    /// Number of row pairs visited per inter-row phase.
    pub fn pair_count(&self, n: usize) -> usize {
        let total = n * n.saturating_sub(1) / 2;
        if total == 0 {
            return 0;
        }
        let want = match self.pair_fraction {
            None if n > 64 => 2 * n,
            _ => (self.effective_pair_fraction(n) * total as f64).ceil() as usize,
        };
        want.clamp(1, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_echo_reference_settings() {
        let c = LearnConfig::with_budget(10);
        assert_eq!(c.max_outer, 20);
        assert_eq!(c.inner_sweeps, 3);
        assert_eq!(c.amplitude_iters, 10);
        assert_eq!(c.trigger, 0.05);
        assert_eq!(c.init_iters, 80);
        c.validate(4, 5).unwrap();
    }

    #[test]
    fn validation() {
        let c = LearnConfig::with_budget(21);
        assert!(c.validate(4, 5).is_err());
        let mut c = LearnConfig::with_budget(3);
        c.inner_sweeps = 0;
        assert!(c.validate(4, 5).is_err());
        let mut c = LearnConfig::with_budget(3);
        c.pair_fraction = Some(0.0);
        assert!(c.validate(4, 5).is_err());
        c.pair_fraction = Some(1.5);
        assert!(c.validate(4, 5).is_err());
        let mut c = LearnConfig::with_budget(3);
        c.epsilon = -1.0;
        assert!(c.validate(4, 5).is_err());
        c.epsilon = 0.0;
        c.trigger = f64::NAN;
        assert!(c.validate(4, 5).is_err());
    }

    #[test]
    fn pair_sampling_defaults() {
        let c = LearnConfig::with_budget(1);
        assert_eq!(c.pair_count(1), 0);
        assert_eq!(c.pair_count(16), 120);
        // n > 64: roughly 2n pairs
        assert_eq!(c.pair_count(100), 200);
        let mut c = c;
        c.pair_fraction = Some(0.5);
        assert_eq!(c.pair_count(16), 60);
    }
}
