//! Experiment harness: config files, batch runs over seeds, run histories,
//! summaries and convergence tables.

pub mod config;
pub mod error;
pub mod experiment;
pub mod history;
pub mod plot;
pub mod summary;

pub use config::{
    load_config, parse_config, write_config, Algorithm, ExperimentConfig, ObjectiveConfig,
    Parallelism,
};
pub use error::{HarnessError, EXIT_INVALID, EXIT_OK, EXIT_RUN_FAILED};
pub use experiment::{history_file_name, run_experiment, RunOptions, PLOT_FILE, SUMMARY_FILE};
pub use history::{HistoryFile, HistoryLine, RunStatus};
pub use plot::{emit_plot_data, plot_table};
pub use summary::{summarize, RunSummary, Stats};
