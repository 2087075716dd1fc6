//! Batchwise learning: row-level support switching, amplitude adjustment,
//! the driver that composes them, and the per-sample K-SVD baseline.

mod amplitude;
mod config;
mod driver;
mod inner;
mod inter;
mod ksvd;

pub use amplitude::{amplitude_adjust, AmplitudeReport};
pub use config::LearnConfig;
pub use driver::{batch_svd, BatchSvdOutcome};
pub use inner::{inner_row_switch, local_objective, select_row_support, InnerRowReport, RowWorkspace};
pub use inter::{inter_row_switch, InterRowReport};
pub use ksvd::{ksvd, KsvdOutcome};

pub use crate::trace::{ObjectiveTrace, Phase, TraceViolation};
