//! Batch execution of one configuration over all its seeds.

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use ms2pso_core::{config_digest, run_observed, Objective, Problem, RunSettings};
use rayon::prelude::*;

use crate::config::{write_config, ExperimentConfig, Parallelism};
use crate::error::{HarnessError, Result};
use crate::history::{
    FinalLine, HistoryFile, HistoryHeader, HistoryLine, HistoryWriter, IterationLine, FORMAT,
};
use crate::plot::plot_table;
use crate::summary::{summarize_files, RunSummary};

pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILE: &str = "convergence.csv";
pub const CONFIG_COPY: &str = "config.toml";

pub fn history_file_name(seed: u64) -> String {
    format!("history-seed-{seed}.jsonl")
}

/// Command-line overrides for [`run_experiment`].
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub force: bool,
    pub parallelism: Option<Parallelism>,
    pub output_dir: Option<PathBuf>,
    /// Directory relative fixture paths resolve against.
    pub config_dir: Option<PathBuf>,
}

fn prepare_output(dir: &Path, force: bool) -> Result<()> {
    if dir.exists() {
        let mut entries = std::fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))?;
        if entries.next().is_some() {
            if !force {
                return Err(HarnessError::OutputExists(dir.to_path_buf()));
            }
            for entry in std::fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
                let path = entry.map_err(|e| HarnessError::io(dir, e))?.path();
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
                let ours = (name.starts_with("history-seed-") && name.ends_with(".jsonl"))
                    || [SUMMARY_FILE, PLOT_FILE, CONFIG_COPY].contains(&name);
                if ours {
                    std::fs::remove_file(&path).map_err(|e| HarnessError::io(&path, e))?;
                }
            }
        }
    }
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

struct SeedOutcome {
    seconds: f64,
    error: Option<String>,
}

fn run_seed(
    config: &ExperimentConfig,
    problem: &Problem,
    seed: u64,
    parallel: bool,
    path: &Path,
) -> Result<SeedOutcome> {
    let settings = RunSettings {
        parallel,
        record_particles: config.record_particles,
        ..RunSettings::new(
            config.population_size,
            config.stage_plan.clone(),
            config.schedule,
            seed,
        )
    };
    let sense = problem.sense();
    let header = HistoryHeader {
        format: FORMAT.to_string(),
        seed,
        config_digest: config_digest(&problem.name(), problem.space(), &settings),
        algorithm: config.algorithm.to_string(),
        objective: problem.name(),
        sense,
        dimension: problem.space().dimension(),
        population_size: config.population_size,
        t_max: config.t_max,
        stage_plan: config.stage_plan.clone(),
        schedule: config.schedule,
    };
    let mut writer = HistoryWriter::create(path)?;
    writer.write(&HistoryLine::Header(header))?;

    let started = Instant::now();
    let mut write_error = None;
    let result = run_observed(problem.space(), problem, &settings, |record| {
        if write_error.is_none() {
            let line = HistoryLine::Iteration(IterationLine::from_record(record, sense));
            if let Err(e) = writer.write(&line) {
                write_error = Some(e);
            }
        }
    });
    let seconds = started.elapsed().as_secs_f64();
    if let Some(e) = write_error {
        return Err(e);
    }
    let (history, error) = match result {
        Ok(h) => (h, None),
        Err(failure) => {
            warn!("seed {seed}: {}", failure.error);
            (*failure.history, Some(failure.error.to_string()))
        }
    };
    writer.write(&HistoryLine::Final(FinalLine::from_history(
        &history,
        sense,
        error.clone(),
    )))?;
    writer.finish()?;
    Ok(SeedOutcome { seconds, error })
}

/// Runs every seed, writes one history per seed plus `summary.json`,
/// `convergence.csv` and a copy of the resolved config. Failed runs are
/// reported in the summary; only I/O problems and invalid configs are errors.
pub fn run_experiment(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    let mut config = config.clone();
    if let Some(p) = opts.parallelism {
        config.parallelism = p;
    }
    if let Some(dir) = &opts.output_dir {
        config.output_dir.clone_from(dir);
    }
    let base = opts
        .config_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    config.validate(&base)?;
    for w in config.warnings() {
        warn!("{w}");
    }
    let problem = config
        .objective
        .build(&base)
        .map_err(|e| HarnessError::Invalid(vec![e]))?;

    let out_dir = config.output_dir.clone();
    prepare_output(&out_dir, opts.force)?;

    let threads = config.parallelism.threads().max(1);
    let parallel = threads > 1;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    info!(
        "{} on {} ({} seeds, {threads} threads)",
        config.algorithm,
        problem.name(),
        config.seeds.len()
    );

    let started = Instant::now();
    let paths: Vec<PathBuf> = config
        .seeds
        .iter()
        .map(|&s| out_dir.join(history_file_name(s)))
        .collect();
    let outcomes: Vec<Result<SeedOutcome>> = pool.install(|| {
        config
            .seeds
            .par_iter()
            .zip(&paths)
            .map(|(&seed, path)| run_seed(&config, &problem, seed, parallel, path))
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let total_seconds = started.elapsed().as_secs_f64();

    let files = paths
        .iter()
        .map(|p| HistoryFile::read(p))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = summarize_files(&files)?;
    summary.wall_clock_seconds = Some(total_seconds);
    for (entry, outcome) in summary.runs.iter_mut().zip(&outcomes) {
        entry.wall_clock_seconds = Some(outcome.seconds);
        if entry.error.is_none() {
            entry.error.clone_from(&outcome.error);
        }
    }

    let summary_path = out_dir.join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&summary_path, json + "\n").map_err(|e| HarnessError::io(&summary_path, e))?;
    let plot_path = out_dir.join(PLOT_FILE);
    std::fs::write(&plot_path, plot_table(&files)?).map_err(|e| HarnessError::io(&plot_path, e))?;
    write_config(&config, &out_dir.join(CONFIG_COPY))?;
    Ok(summary)
}
