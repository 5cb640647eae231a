use serde::{Deserialize, Serialize};

use super::StagePlan;
use crate::error::Error;
use crate::schedules::{Coefficients, ScheduleSpec};

/// State of the run after one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Iterations completed, starting at 1.
    pub t: usize,
    pub gbest_fitness: f64,
    /// One entry per live swarm, in swarm order.
    pub sbest_fitness: Vec<f64>,
    /// Coefficients used to compute this iteration.
    pub coefficients: Coefficients,
    pub eval_count: u64,
    /// Fitness of every particle at its new position, by particle id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle_fitness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub seed: u64,
    pub config_digest: String,
    pub population_size: usize,
    pub t_max: usize,
    pub stage_plan: StagePlan,
    pub schedule: ScheduleSpec,
    /// Best fitness after the initial evaluation pass, `None` if it failed.
    pub initial_gbest_fitness: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: Option<f64>,
    pub eval_count: u64,
}

impl RunHistory {
    /// Evaluations spent after the initial pass.
    pub fn post_init_evaluations(&self) -> u64 {
        self.eval_count
            .saturating_sub(if self.initial_gbest_fitness.is_some() {
                self.population_size as u64
            } else {
                0
            })
    }

    pub fn is_complete(&self) -> bool {
        self.records.len() == self.t_max
    }

    pub fn best_so_far(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.gbest_fitness)
    }
}

/// An aborted run together with everything recorded before the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("run with seed {} failed after {} iterations: {error}", history.seed, history.records.len())]
pub struct RunFailure {
    pub error: Error,
    pub history: Box<RunHistory>,
}
