use std::fmt;
use std::str::FromStr;

use log::info;

use super::report::ErrorReport;
use crate::coding::{block_omp, dict_approx_init, gaussian_dictionary, initial_dictionary, omp_batch};
use crate::error::{Error, Result};
use crate::learn::{batch_svd, ksvd, LearnConfig};
use crate::linalg::DenseMatrix;
use crate::seeded_rng;
use crate::sparse::SparseCoeff;
use crate::trace::{ObjectiveTrace, Phase};

/// Stream offset separating the random-dictionary draw from the `A0` draw.
const RANDOM_DICT_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    /// Block-OMP warm start followed by the monotone batch learner.
    Batch,
    /// K-SVD with per-sample sparsity `⌊K/p⌋`.
    Ksvd,
    /// Gaussian random dictionary with per-sample OMP at `⌊K/p⌋`.
    RndOmp,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Batch, Algo::Ksvd, Algo::RndOmp];

    pub fn label(self) -> &'static str {
        match self {
            Algo::Batch => "batch",
            Algo::Ksvd => "ksvd",
            Algo::RndOmp => "rnd-omp",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "batch" => Ok(Algo::Batch),
            "ksvd" => Ok(Algo::Ksvd),
            "rnd-omp" => Ok(Algo::RndOmp),
            other => Err(Error::invalid(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Settings of a benchmark beyond the learner configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    /// Dictionary size `n`.
    pub atoms: usize,
    pub ksvd_iters: usize,
}

impl BenchOptions {
    pub const DEFAULT_KSVD_ITERS: usize = 100;

    pub fn new(atoms: usize) -> Self {
        Self {
            atoms,
            ksvd_iters: Self::DEFAULT_KSVD_ITERS,
        }
    }
}

/// A learned model together with its report on the training samples.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub algo: Algo,
    pub dictionary: DenseMatrix,
    pub coeffs: SparseCoeff,
    pub report: ErrorReport,
}

/// Per-sample sparsity `⌊K/p⌋` used by the columnwise baselines.
pub fn per_sample_sparsity(budget: usize, p: usize, m: usize, n: usize) -> Result<usize> {
    let k = budget / p;
    if k == 0 {
        return Err(Error::invalid(format!(
            "budget {budget} gives less than one nonzero per sample for {p} samples"
        )));
    }
    if k > m.min(n) {
        return Err(Error::invalid(format!(
            "per-sample sparsity {k} exceeds min(m, n) = {}",
            m.min(n)
        )));
    }
    Ok(k)
}

/// Adds structurally-zero entries, in `(col, row)` order, until `x` holds
/// exactly `budget` nonzeros. Used when the pursuit explained the data with
/// fewer atoms than the budget allows.
pub fn pad_to_budget(x: &mut SparseCoeff, budget: usize) -> Result<()> {
    'outer: for j in 0..x.p() {
        for i in 0..x.n() {
            if x.nnz() >= budget {
                break 'outer;
            }
            if !x.contains(i, j) {
                x.insert(i, j, 0.0)?;
            }
        }
    }
    if x.nnz() != budget {
        return Err(Error::invalid(format!("cannot reach budget {budget}")));
    }
    Ok(())
}

/// Unit-norm columns; zero columns are left as they are.
pub fn normalize_columns(y: &DenseMatrix) -> DenseMatrix {
    let norms = y.column_norms();
    DenseMatrix::from_fn(y.rows(), y.cols(), |i, j| {
        if norms[j] > 0.0 {
            y.get(i, j) / norms[j]
        } else {
            0.0
        }
    })
    .expect("normalized matrix is finite")
}

fn check_budget(y: &DenseMatrix, cfg: &LearnConfig, opts: &BenchOptions) -> Result<()> {
    if opts.atoms == 0 {
        return Err(Error::invalid("dictionary needs at least one atom"));
    }
    cfg.validate(opts.atoms, y.cols())
}

/// Learns a model with one algorithm. `A0` is drawn from `cfg.seed` so every
/// algorithm that needs a starting dictionary sees the same one.
pub fn run_algo(y: &DenseMatrix, cfg: &LearnConfig, opts: &BenchOptions, algo: Algo) -> Result<RunArtifacts> {
    check_budget(y, cfg, opts)?;
    let (m, p) = y.shape();
    let n = opts.atoms;
    let budget = cfg.budget;
    let (dictionary, coeffs, trace) = match algo {
        Algo::Batch => {
            let a0 = initial_dictionary(y, n, &mut seeded_rng(cfg.seed))?;
            let init = dict_approx_init(y, &a0, budget, cfg.init_iters)?;
            let mut x = init.coeffs;
            if x.nnz() < budget {
                pad_to_budget(&mut x, budget)?;
            }
            let out = batch_svd(y, &init.dictionary, &x, cfg)?;
            let mut trace = init.trace;
            trace.extend(&out.trace);
            (out.dictionary, out.coeffs, trace)
        }
        Algo::Ksvd => {
            let k = per_sample_sparsity(budget, p, m, n)?;
            let a0 = initial_dictionary(y, n, &mut seeded_rng(cfg.seed))?;
            let out = ksvd(y, &a0, k, opts.ksvd_iters)?;
            (out.dictionary, out.coeffs, out.trace)
        }
        Algo::RndOmp => {
            let k = per_sample_sparsity(budget, p, m, n)?;
            let a = gaussian_dictionary(m, n, &mut seeded_rng(cfg.seed ^ RANDOM_DICT_STREAM))?;
            let x = omp_batch(y, &a, k)?;
            let mut trace = ObjectiveTrace::new();
            trace.push(Phase::Coding, crate::linalg::objective(y, &a, &x)?)?;
            (a, x, trace)
        }
    };
    let mut report = ErrorReport::evaluate(algo.label(), cfg.seed, budget, y, &dictionary, &coeffs, trace)?;
    if algo == Algo::Batch {
        report.config = Some(cfg.clone());
    }
    info!(
        "{algo}: mean error {:.6e} (std {:.6e}), {} nonzeros",
        report.mean_error, report.std_error, report.total_nnz
    );
    Ok(RunArtifacts {
        algo,
        dictionary,
        coeffs,
        report,
    })
}

/// Codes new samples with a learned dictionary at the per-sample average
/// budget of the training run: block OMP for the batch learner, per-sample
/// OMP for the columnwise baselines.
pub fn encode(
    y: &DenseMatrix,
    a: &DenseMatrix,
    algo: Algo,
    train_budget: usize,
    train_samples: usize,
) -> Result<SparseCoeff> {
    let p = y.cols();
    match algo {
        Algo::Batch => {
            let budget = (train_budget as u128 * p as u128 / train_samples as u128) as usize;
            let budget = budget.clamp(1, a.cols() * p);
            Ok(block_omp(y, a, budget)?.coeffs)
        }
        Algo::Ksvd | Algo::RndOmp => {
            let k = per_sample_sparsity(train_budget, train_samples, a.rows(), a.cols())?;
            omp_batch(y, a, k)
        }
    }
}

/// Runs every algorithm in `algos` on the same data and seed.
///
/// With `holdout`, each learned dictionary is also used to encode the
/// held-out samples and a second report labelled `<algo>-holdout` follows
/// the training report.
pub fn run_benchmark(
    y: &DenseMatrix,
    cfg: &LearnConfig,
    opts: &BenchOptions,
    algos: &[Algo],
    holdout: Option<&DenseMatrix>,
) -> Result<Vec<ErrorReport>> {
    check_budget(y, cfg, opts)?;
    if let Some(h) = holdout {
        if h.rows() != y.rows() {
            return Err(Error::invalid("held-out samples have a different dimension"));
        }
    }
    let mut reports = Vec::new();
    for &algo in algos {
        let run = run_algo(y, cfg, opts, algo)?;
        let dictionary = run.dictionary.clone();
        reports.push(run.report);
        if let Some(h) = holdout {
            let x = encode(h, &dictionary, algo, cfg.budget, y.cols())?;
            let label = format!("{}-holdout", algo.label());
            reports.push(ErrorReport::evaluate(
                label,
                cfg.seed,
                cfg.budget,
                h,
                &dictionary,
                &x,
                ObjectiveTrace::new(),
            )?);
        }
    }
    Ok(reports)
}
