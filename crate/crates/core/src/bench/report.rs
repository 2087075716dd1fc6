use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learn::LearnConfig;
use crate::linalg::{column_errors, DenseMatrix};
use crate::sparse::SparseCoeff;
use crate::trace::ObjectiveTrace;

/// Arithmetic mean and population standard deviation (denominator `p`).
pub fn report_stats(errors: &[f64]) -> Result<(f64, f64)> {
    if errors.is_empty() {
        return Err(Error::invalid("statistics of an empty error list"));
    }
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &e) in errors.iter().enumerate() {
        let delta = e - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (e - mean);
    }
    let var = (m2 / errors.len() as f64).max(0.0);
    Ok((mean, var.sqrt()))
}

/// Per-sample reconstruction errors of one run, summarized.
///
/// Serializes to `{algo, seed, m, n, p, K, mean_error, std_error, total_nnz,
/// avg_nnz_per_sample, objective_trace}`, plus `config` for runs of the
/// batch learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub algo: String,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K")]
    pub budget: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub total_nnz: usize,
    pub avg_nnz_per_sample: f64,
    pub objective_trace: ObjectiveTrace,
    /// Learner settings the run used; present for the batch learner only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<LearnConfig>,
    /// `‖y_j − A x_j‖₂` for every sample; not serialized.
    #[serde(skip)]
    pub per_sample_errors: Vec<f64>,
}

impl ErrorReport {
    /// Evaluates `(A, X)` on `Y` and fills in the summary.
    pub fn evaluate(
        algo: impl Into<String>,
        seed: u64,
        budget: usize,
        y: &DenseMatrix,
        a: &DenseMatrix,
        x: &SparseCoeff,
        trace: ObjectiveTrace,
    ) -> Result<Self> {
        let errors = column_errors(y, a, x)?;
        let (mean_error, std_error) = report_stats(&errors)?;
        Ok(Self {
            algo: algo.into(),
            seed,
            m: y.rows(),
            n: a.cols(),
            p: y.cols(),
            budget,
            mean_error,
            std_error,
            total_nnz: x.nnz(),
            avg_nnz_per_sample: x.nnz() as f64 / y.cols() as f64,
            objective_trace: trace,
            config: None,
            per_sample_errors: errors,
        })
    }
}

/// Pretty JSON with a trailing newline, for one report or a list.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Phase;

    #[test]
    fn stats_examples() {
        assert_eq!(report_stats(&[2.0, 2.0, 2.0]).unwrap(), (2.0, 0.0));
        assert_eq!(report_stats(&[0.0, 2.0]).unwrap(), (1.0, 1.0));
        assert!(report_stats(&[]).is_err());
    }

    #[test]
    fn json_field_names() {
        let y = DenseMatrix::identity(2).unwrap();
        let a = DenseMatrix::identity(2).unwrap();
        let x = SparseCoeff::from_triplets(2, 2, [(0, 0, 1.0)]).unwrap();
        let mut trace = ObjectiveTrace::new();
        trace.push(Phase::Coding, 1.0).unwrap();
        let r = ErrorReport::evaluate("batch", 4, 1, &y, &a, &x, trace).unwrap();
        assert_eq!(r.per_sample_errors, vec![0.0, 1.0]);
        assert_eq!(r.avg_nnz_per_sample, 0.5);
        let v: serde_json::Value = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in [
            "algo",
            "seed",
            "m",
            "n",
            "p",
            "K",
            "mean_error",
            "std_error",
            "total_nnz",
            "avg_nnz_per_sample",
            "objective_trace",
        ] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(keys.len(), 11);
        assert_eq!(v["objective_trace"][0][0], "coding");
    }
}
