//! Objective history recorded by the solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which step produced an objective value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// After one row's inner support switch.
    Inner,
    /// After one pair's inter-row support switch.
    Inter,
    /// After one half-step of amplitude adjustment.
    Amplitude,
    /// Start of an outer iteration, recomputed from scratch.
    Outer,
    /// After a sparse coding pass (block OMP, per-sample OMP).
    Coding,
    /// After a dictionary update.
    Dictionary,
}

impl Phase {
    /// Phases whose steps can never increase the objective.
    pub fn is_monotone(self) -> bool {
        matches!(self, Phase::Inner | Phase::Inter | Phase::Amplitude)
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::Inner => "inner",
            Phase::Inter => "inter",
            Phase::Amplitude => "amplitude",
            Phase::Outer => "outer",
            Phase::Coding => "coding",
            Phase::Dictionary => "dictionary",
        }
    }
}

/// A step where the objective rose by more than the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceViolation {
    pub index: usize,
    pub phase: Phase,
    pub previous: f64,
    pub value: f64,
}

impl std::fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} step {} rose from {:e} to {:e}",
            self.phase.label(),
            self.index,
            self.previous,
            self.value
        )
    }
}

/// Ordered `(phase, ‖Y − AX‖²_F)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveTrace {
    entries: Vec<(Phase, f64)>,
}

impl ObjectiveTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, phase: Phase, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NonFinite(format!(
                "objective {value} recorded in {} phase",
                phase.label()
            )));
        }
        self.entries.push((phase, value));
        Ok(())
    }

    pub fn entries(&self) -> &[(Phase, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first_value(&self) -> Option<f64> {
        self.entries.first().map(|e| e.1)
    }

    pub fn last_value(&self) -> Option<f64> {
        self.entries.last().map(|e| e.1)
    }

    pub fn values(&self, phase: Phase) -> Vec<f64> {
        self.entries.iter().filter(|e| e.0 == phase).map(|e| e.1).collect()
    }

    pub fn extend(&mut self, other: &ObjectiveTrace) {
        self.entries.extend_from_slice(&other.entries);
    }

    /// Every entry of a monotone phase must satisfy
    /// `value ≤ previous·(1 + rel_tol) + abs_tol`, where `previous` is the
    /// entry right before it regardless of phase.
    pub fn check_monotone(&self, rel_tol: f64, abs_tol: f64) -> std::result::Result<(), TraceViolation> {
        for (index, w) in self.entries.windows(2).enumerate() {
            let (prev, cur) = (w[0].1, w[1]);
            if cur.0.is_monotone() && cur.1 > prev * (1.0 + rel_tol) + abs_tol {
                return Err(TraceViolation {
                    index: index + 1,
                    phase: cur.0,
                    previous: prev,
                    value: cur.1,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_check_ignores_outer_and_coding() {
        let mut t = ObjectiveTrace::new();
        t.push(Phase::Outer, 10.0).unwrap();
        t.push(Phase::Inner, 9.0).unwrap();
        t.push(Phase::Outer, 9.5).unwrap();
        t.push(Phase::Amplitude, 9.5).unwrap();
        t.push(Phase::Coding, 20.0).unwrap();
        assert!(t.check_monotone(0.0, 0.0).is_ok());
        t.push(Phase::Inter, 20.1).unwrap();
        let v = t.check_monotone(1e-9, 0.0).unwrap_err();
        assert_eq!(v.index, 5);
        assert_eq!(v.phase, Phase::Inter);
        assert!(t.check_monotone(0.01, 0.0).is_ok());
    }

    #[test]
    fn rejects_non_finite() {
        let mut t = ObjectiveTrace::new();
        assert!(t.push(Phase::Inner, f64::NAN).is_err());
        assert!(t.is_empty());
    }

    #[test]
    fn serializes_as_pairs() {
        let mut t = ObjectiveTrace::new();
        t.push(Phase::Inner, 1.5).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"[["inner",1.5]]"#);
    }
}
