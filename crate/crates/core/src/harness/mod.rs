//! Trace tooling behind the `nertcam` binary: synthetic dataset generation,
//! trace replay, lockstep comparison against the oracle, and throughput
//! measurement.

mod bench;
mod config;
mod diff;
mod gen;
mod run;
mod trace;

use thiserror::Error;

pub use bench::{bench, BenchMix, BenchRow, TABLE_SIZES};
pub use config::{resolve_config, ConfigFile, ConfigOverrides};
pub use diff::{diff_trace, fuzz_trace, oracle_from_memory, DiffReport, Differ, Divergence};
pub use gen::{generate, Dataset, GenParams, Generated, ObjectMap, SensationOrder};
pub use run::{run_trace, RecordReport, RunReport, Summary};
pub use trace::{parse_trace, write_trace, FeatureSpec, TraceRecord};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("parameters: {0}")]
    Params(String),
    #[error("record {index}: {message}")]
    Record { index: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Render one cycle report as a JSON line.
pub fn cycle_line(report: &crate::system::CycleReport) -> String {
    serde_json::json!({
        "cycle": report.cycle,
        "from": report.from.code(),
        "to": report.to.code(),
        "op": report.op.map(|op| op.name()),
        "valid_entry": report.valid_entry,
        "busy": report.busy,
        "outcome": report.response.as_ref().map(|r| r.outcome().name()),
    })
    .to_string()
}
