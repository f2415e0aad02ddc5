//! Benchmark plumbing: the instance generator, text file formats, the
//! experiment runner and CSV reports.

mod experiment;
mod generator;
mod io;
mod report;

pub use experiment::{
    format_summary, run_experiment, run_file_stem, write_experiment, Algorithm, BackendChoice,
    ExperimentError, ExperimentResult, RunConfig, RunRecord,
};
pub use generator::{generate_instance, GeneratorParams};
pub use io::{
    format_front_csv, format_instance, format_sidecar, parse_front_csv, parse_instance,
    parse_sidecar, read_front_csv, read_instance, write_instance, FormatError, SidecarEntry,
};
pub use report::{emit_eaf, emit_metrics, METRIC_COLUMNS};
