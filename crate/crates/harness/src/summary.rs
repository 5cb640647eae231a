//! Cross-seed statistics.

use std::path::{Path, PathBuf};

use ms2pso_core::Sense;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::history::{HistoryFile, RunStatus};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Some(Self {
            count: n,
            median,
            min: sorted[0],
            max: sorted[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub seed: u64,
    pub status: RunStatus,
    pub error: Option<String>,
    /// In the objective's sense.
    pub final_best: Option<f64>,
    pub best_position: Vec<f64>,
    pub eval_count: u64,
    pub iterations: usize,
    pub history_file: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub t: usize,
    #[serde(flatten)]
    pub stats: Stats,
}

/// Values are reported in the objective's own sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub objective: String,
    pub sense: Sense,
    pub dimension: usize,
    /// `None` when the histories mix algorithms.
    pub algorithm: Option<String>,
    pub population_size: usize,
    pub t_max: usize,
    pub runs: Vec<RunEntry>,
    /// Over successful runs only.
    pub final_best: Option<Stats>,
    pub total_evaluations: u64,
    pub per_iteration: Vec<IterationStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl RunSummary {
    pub fn failed_runs(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.status == RunStatus::Failed)
            .count()
    }

    /// Copy without timing fields, for comparing summaries.
    pub fn without_timing(&self) -> Self {
        let mut s = self.clone();
        s.wall_clock_seconds = None;
        for r in &mut s.runs {
            r.wall_clock_seconds = None;
        }
        s
    }
}

/// Reads histories and summarizes them.
pub fn summarize(history_paths: &[PathBuf]) -> Result<RunSummary> {
    let files = history_paths
        .iter()
        .map(|p| HistoryFile::read(p))
        .collect::<Result<Vec<_>>>()?;
    summarize_files(&files)
}

pub fn summarize_files(files: &[HistoryFile]) -> Result<RunSummary> {
    let first = files.first().ok_or(HarnessError::NoHistories)?;
    check_compatible(files)?;
    let h = &first.header;
    let algorithm = files
        .iter()
        .all(|f| f.header.algorithm == h.algorithm)
        .then(|| h.algorithm.clone());

    let runs: Vec<RunEntry> = files.iter().map(entry_for).collect();
    let finals: Vec<f64> = runs
        .iter()
        .filter(|r| r.status == RunStatus::Ok)
        .filter_map(|r| r.final_best)
        .collect();
    let per_iteration = (1..=h.t_max)
        .filter_map(|t| {
            let values: Vec<f64> = files
                .iter()
                .filter_map(|f| f.iterations.get(t - 1))
                .map(|it| it.best_value)
                .collect();
            Stats::of(&values).map(|stats| IterationStats { t, stats })
        })
        .collect();
    Ok(RunSummary {
        objective: h.objective.clone(),
        sense: h.sense,
        dimension: h.dimension,
        algorithm,
        population_size: h.population_size,
        t_max: h.t_max,
        total_evaluations: runs.iter().map(|r| r.eval_count).sum(),
        runs,
        final_best: Stats::of(&finals),
        per_iteration,
        wall_clock_seconds: None,
    })
}

fn entry_for(f: &HistoryFile) -> RunEntry {
    let fin = f.final_line.as_ref();
    RunEntry {
        seed: f.header.seed,
        status: if f.succeeded() {
            RunStatus::Ok
        } else {
            RunStatus::Failed
        },
        error: match fin {
            Some(fl) => fl.error.clone(),
            None => Some("history has no final record".to_string()),
        },
        final_best: f.final_value(),
        best_position: fin.map(|fl| fl.gbest_position.clone()).unwrap_or_default(),
        eval_count: fin
            .map(|fl| fl.eval_count)
            .or_else(|| f.iterations.last().map(|it| it.eval_count))
            .unwrap_or(0),
        iterations: f.iterations.len(),
        history_file: file_name(&f.path),
        wall_clock_seconds: None,
    }
}

fn file_name(path: &Path) -> PathBuf {
    path.file_name()
        .map_or_else(|| path.to_path_buf(), PathBuf::from)
}

/// Histories must agree on objective, sense, dimension and t_max.
pub fn check_compatible(files: &[HistoryFile]) -> Result<()> {
    let Some(first) = files.first() else {
        return Err(HarnessError::NoHistories);
    };
    let h = &first.header;
    let mut differing = Vec::new();
    for f in &files[1..] {
        let g = &f.header;
        for (field, same) in [
            ("objective", g.objective == h.objective),
            ("sense", g.sense == h.sense),
            ("dimension", g.dimension == h.dimension),
            ("t_max", g.t_max == h.t_max),
        ] {
            if !same && !differing.iter().any(|d: &String| d.starts_with(field)) {
                differing.push(format!(
                    "{field} ({} vs {})",
                    first.path.display(),
                    f.path.display()
                ));
            }
        }
    }
    if differing.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Mismatch(differing))
    }
}
