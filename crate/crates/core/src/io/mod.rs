//! Series files, configuration and the jobs run by the command line tool.

pub mod config;
mod csv;
pub mod job;

pub use config::{
    parse_config_text, parse_duration, read_config_file, AnalysisConfig, JobSource, OutputFormat, Overrides,
};
pub use csv::{load_series_csv, save_series_csv};
pub use job::{analyze_series, error_report, run_analyze, run_ensemble_job, run_simulate};
