//! Run history files: one JSON object per line.
//!
//! The first line is a `header`, then one `iteration` line per completed
//! iteration, then a `final` line. Fitness fields use the engine's
//! minimization convention; `*_value` fields are in the objective's own
//! sense.
//!
//! ```text
//! {"kind":"header","format":"ms2pso-history/1","seed":1,"config_digest":"…","algorithm":"ms2pso","objective":"sphere","sense":"minimize","dimension":10,"population_size":40,"t_max":125,"stage_plan":[…],"schedule":{…}}
//! {"kind":"iteration","t":1,"gbest_fitness":3.2,"best_value":3.2,"sbest_fitness":[…],"omega":0.9,"c1":2.5,"c2":0.5,"eval_count":80}
//! {"kind":"final","status":"ok","error":null,"initial_gbest_fitness":5.1,"gbest_fitness":0.001,"best_value":0.001,"gbest_position":[…],"eval_count":5040}
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ms2pso_core::{IterationRecord, RunHistory, ScheduleSpec, Sense, StagePlan};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const FORMAT: &str = "ms2pso-history/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryHeader {
    pub format: String,
    pub seed: u64,
    pub config_digest: String,
    pub algorithm: String,
    pub objective: String,
    pub sense: Sense,
    pub dimension: usize,
    pub population_size: usize,
    pub t_max: usize,
    pub stage_plan: StagePlan,
    pub schedule: ScheduleSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLine {
    pub t: usize,
    pub gbest_fitness: f64,
    pub best_value: f64,
    pub sbest_fitness: Vec<f64>,
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
    pub eval_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle_fitness: Option<Vec<f64>>,
}

impl IterationLine {
    pub fn from_record(record: &IterationRecord, sense: Sense) -> Self {
        Self {
            t: record.t,
            gbest_fitness: record.gbest_fitness,
            best_value: sense.to_raw(record.gbest_fitness),
            sbest_fitness: record.sbest_fitness.clone(),
            omega: record.coefficients.omega,
            c1: record.coefficients.c1,
            c2: record.coefficients.c2,
            eval_count: record.eval_count,
            particle_fitness: record.particle_fitness.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalLine {
    pub status: RunStatus,
    pub error: Option<String>,
    pub initial_gbest_fitness: Option<f64>,
    pub gbest_fitness: Option<f64>,
    pub best_value: Option<f64>,
    pub gbest_position: Vec<f64>,
    pub eval_count: u64,
}

impl FinalLine {
    pub fn from_history(history: &RunHistory, sense: Sense, error: Option<String>) -> Self {
        Self {
            status: if error.is_some() {
                RunStatus::Failed
            } else {
                RunStatus::Ok
            },
            error,
            initial_gbest_fitness: history.initial_gbest_fitness,
            gbest_fitness: history.gbest_fitness,
            best_value: history.gbest_fitness.map(|f| sense.to_raw(f)),
            gbest_position: history.gbest_position.clone(),
            eval_count: history.eval_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HistoryLine {
    Header(HistoryHeader),
    Iteration(IterationLine),
    Final(FinalLine),
}

/// Streams a history to disk line by line.
pub struct HistoryWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl HistoryWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn write(&mut self, line: &HistoryLine) -> Result<()> {
        let json = serde_json::to_string(line).expect("history lines serialize");
        writeln!(self.out, "{json}").map_err(|e| HarnessError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out
            .flush()
            .map_err(|e| HarnessError::io(&self.path, e))
    }
}

/// A history read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryFile {
    pub path: PathBuf,
    pub header: HistoryHeader,
    pub iterations: Vec<IterationLine>,
    /// Missing when the run was interrupted before finishing.
    pub final_line: Option<FinalLine>,
}

impl HistoryFile {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
        let bad = |line: usize, message: String| HarnessError::History {
            path: path.to_path_buf(),
            message: format!("line {line}: {message}"),
        };
        let mut header = None;
        let mut iterations = Vec::new();
        let mut final_line = None;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| HarnessError::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: HistoryLine =
                serde_json::from_str(&line).map_err(|e| bad(idx + 1, e.to_string()))?;
            match (parsed, header.is_some()) {
                (HistoryLine::Header(h), false) => {
                    if h.format != FORMAT {
                        return Err(bad(idx + 1, format!("unsupported format {:?}", h.format)));
                    }
                    header = Some(h);
                }
                (HistoryLine::Header(_), true) => return Err(bad(idx + 1, "second header".into())),
                (_, false) => return Err(bad(idx + 1, "expected header first".into())),
                (_, true) if final_line.is_some() => {
                    return Err(bad(idx + 1, "content after final record".into()))
                }
                (HistoryLine::Iteration(it), true) => iterations.push(it),
                (HistoryLine::Final(f), true) => final_line = Some(f),
            }
        }
        let header = header.ok_or_else(|| bad(0, "empty history".into()))?;
        Ok(Self {
            path: path.to_path_buf(),
            header,
            iterations,
            final_line,
        })
    }

    pub fn succeeded(&self) -> bool {
        self.final_line
            .as_ref()
            .is_some_and(|f| f.status == RunStatus::Ok)
    }

    /// Final best in the objective's sense.
    pub fn final_value(&self) -> Option<f64> {
        self.final_line
            .as_ref()
            .and_then(|f| f.best_value)
            .or_else(|| self.iterations.last().map(|it| it.best_value))
    }

    pub fn max_swarm_count(&self) -> usize {
        self.iterations
            .iter()
            .map(|it| it.sbest_fitness.len())
            .max()
            .unwrap_or(0)
    }
}
