use std::path::{Path, PathBuf};
use std::process::ExitCode;

use batchsvd::bench::{
    encode, extract_patches, load_matrix, load_pgm, load_sparse, normalize_columns, run_algo, run_benchmark,
    save_matrix, save_sparse, to_json, Algo, BenchOptions, ErrorReport, PatchSpec,
};
use batchsvd::learn::{LearnConfig, ObjectiveTrace};
use batchsvd::{DenseMatrix, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "batchsvd", version, about = "Batchwise dictionary learning benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample square patches from a PGM image into a matrix file.
    Patches(PatchesArgs),
    /// Learn a dictionary and coefficients with one algorithm.
    Learn(LearnCmd),
    /// Code samples with an existing dictionary.
    Encode(EncodeArgs),
    /// Report per-sample errors of a dictionary/coefficient pair.
    Eval(EvalArgs),
    /// Run several algorithms on the same data, seed and budget.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Batch,
    Ksvd,
    RndOmp,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Batch => Algo::Batch,
            AlgoArg::Ksvd => Algo::Ksvd,
            AlgoArg::RndOmp => Algo::RndOmp,
        }
    }
}

#[derive(Args)]
struct PatchesArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 8)]
    patch_size: usize,
    #[arg(long, default_value_t = 3000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LearnArgs {
    /// Samples, one per column.
    #[arg(long = "in")]
    input: PathBuf,
    /// Dictionary size n.
    #[arg(long)]
    atoms: usize,
    /// Total nonzero budget K.
    #[arg(long)]
    budget: usize,
    /// Outer iterations of the batch learner.
    #[arg(long, default_value_t = LearnConfig::DEFAULT_MAX_OUTER)]
    iters: usize,
    /// Warm-start iterations.
    #[arg(long, default_value_t = LearnConfig::DEFAULT_INIT_ITERS)]
    init_iters: usize,
    #[arg(long, default_value_t = BenchOptions::DEFAULT_KSVD_ITERS)]
    ksvd_iters: usize,
    /// Inner-row refinement rounds per row visit.
    #[arg(long, default_value_t = LearnConfig::DEFAULT_INNER_SWEEPS)]
    n1: usize,
    /// Amplitude-adjustment alternations per outer iteration.
    #[arg(long, default_value_t = LearnConfig::DEFAULT_AMPLITUDE_ITERS)]
    n2: usize,
    #[arg(long, default_value_t = LearnConfig::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Inter-row switching runs when the inner phase gains less than this.
    #[arg(long, default_value_t = LearnConfig::DEFAULT_TRIGGER)]
    trigger: f64,
    #[arg(long)]
    pair_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scale every sample to unit norm first.
    #[arg(long)]
    normalize: bool,
}

impl LearnArgs {
    fn config(&self) -> LearnConfig {
        LearnConfig {
            budget: self.budget,
            init_iters: self.init_iters,
            inner_sweeps: self.n1,
            amplitude_iters: self.n2,
            epsilon: self.epsilon,
            trigger: self.trigger,
            pair_fraction: self.pair_fraction,
            seed: self.seed,
            max_outer: self.iters,
        }
    }

    fn options(&self) -> BenchOptions {
        BenchOptions {
            atoms: self.atoms,
            ksvd_iters: self.ksvd_iters,
        }
    }
}

#[derive(Args)]
struct LearnCmd {
    #[command(flatten)]
    learn: LearnArgs,
    #[arg(long, value_enum, default_value = "batch")]
    algo: AlgoArg,
    #[arg(long)]
    dict_out: Option<PathBuf>,
    #[arg(long)]
    coef_out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    dict: PathBuf,
    /// Total nonzero budget for these samples.
    #[arg(long)]
    budget: usize,
    /// `batch` codes with block OMP, the others with per-sample OMP.
    #[arg(long, value_enum, default_value = "batch")]
    algo: AlgoArg,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    coef_out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    dict: PathBuf,
    #[arg(long)]
    coef: PathBuf,
    /// Label written into the report.
    #[arg(long, default_value = "eval")]
    algo: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    learn: LearnArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "batch,ksvd,rnd-omp")]
    algos: Vec<AlgoArg>,
    /// Held-out samples encoded with each learned dictionary.
    #[arg(long)]
    holdout: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn load_samples(path: &Path, normalize: bool) -> Result<DenseMatrix> {
    let y = load_matrix(path)?;
    Ok(if normalize { normalize_columns(&y) } else { y })
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Patches(args) => {
            let img = load_pgm(&args.input)?;
            let spec = PatchSpec {
                patch_size: args.patch_size,
                patch_count: args.count,
                seed: args.seed,
            };
            save_matrix(&args.out, &extract_patches(&img, &spec)?)
        }
        Command::Learn(args) => {
            let y = load_samples(&args.learn.input, args.learn.normalize)?;
            let run = run_algo(&y, &args.learn.config(), &args.learn.options(), args.algo.into())?;
            if let Some(p) = &args.dict_out {
                save_matrix(p, &run.dictionary)?;
            }
            if let Some(p) = &args.coef_out {
                save_sparse(p, &run.coeffs)?;
            }
            emit(&to_json(&run.report)?, args.report_out.as_deref())
        }
        Command::Encode(args) => {
            let y = load_samples(&args.input, args.normalize)?;
            let a = load_matrix(&args.dict)?;
            let x = encode(&y, &a, args.algo.into(), args.budget, y.cols())?;
            save_sparse(&args.coef_out, &x)
        }
        Command::Eval(args) => {
            let y = load_samples(&args.input, args.normalize)?;
            let a = load_matrix(&args.dict)?;
            let x = load_sparse(&args.coef)?;
            let report = ErrorReport::evaluate(args.algo, args.seed, x.nnz(), &y, &a, &x, ObjectiveTrace::new())?;
            emit(&to_json(&report)?, args.report_out.as_deref())
        }
        Command::Compare(args) => {
            let y = load_samples(&args.learn.input, args.learn.normalize)?;
            let holdout = match &args.holdout {
                Some(p) => Some(load_samples(p, args.learn.normalize)?),
                None => None,
            };
            let algos: Vec<Algo> = args.algos.iter().map(|&a| a.into()).collect();
            let reports = run_benchmark(
                &y,
                &args.learn.config(),
                &args.learn.options(),
                &algos,
                holdout.as_ref(),
            )?;
            emit(&to_json(&reports)?, args.report_out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
