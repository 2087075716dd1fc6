//! Data ingestion, experiment orchestration and error reporting for the
//! benchmark CLI.

pub mod io;
pub mod patches;
pub mod pgm;
pub mod report;
pub mod runner;

pub use io::{
    format_matrix, format_sparse, load_matrix, load_sparse, parse_matrix, parse_sparse, save_matrix, save_sparse,
};
pub use patches::{extract_patches, PatchSpec};
pub use pgm::{load_pgm, parse_pgm, save_pgm, GrayImage};
pub use report::{report_stats, to_json, ErrorReport};
pub use runner::{
    encode, normalize_columns, pad_to_budget, per_sample_sparsity, run_algo, run_benchmark, Algo, BenchOptions,
    RunArtifacts,
};
