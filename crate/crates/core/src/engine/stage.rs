use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub swarm_count: usize,
    pub iterations: usize,
}

/// Ordered stages; swarms collapse at each boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StagePlan {
    pub stages: Vec<Stage>,
}

impl StagePlan {
    pub fn new(stages: Vec<Stage>) -> Self {
        Self { stages }
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(swarm_count, iterations)| Stage {
                    swarm_count,
                    iterations,
                })
                .collect(),
        )
    }

    /// One swarm for the whole run.
    pub fn single(t_max: usize) -> Self {
        Self::from_pairs(&[(1, t_max)])
    }

    pub fn total_iterations(&self) -> usize {
        self.stages.iter().map(|s| s.iterations).sum()
    }

    pub fn initial_swarm_count(&self) -> usize {
        self.stages.first().map_or(0, |s| s.swarm_count)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Swarm count in force while computing iteration `t` (0-based).
    pub fn swarm_count_at(&self, t: usize) -> Option<usize> {
        let mut end = 0;
        for stage in &self.stages {
            end += stage.iterations;
            if t < end {
                return Some(stage.swarm_count);
            }
        }
        None
    }

    /// Every violated invariant. `t_max` is checked when given.
    pub fn violations(&self, population_size: usize, t_max: Option<usize>) -> Vec<String> {
        let mut out = Vec::new();
        if self.stages.is_empty() {
            out.push("stage_plan must contain at least one stage".to_string());
            return out;
        }
        for (k, stage) in self.stages.iter().enumerate() {
            if stage.swarm_count == 0 {
                out.push(format!("stage_plan[{k}].swarm_count must be at least 1"));
            }
            if stage.iterations == 0 {
                out.push(format!("stage_plan[{k}].iterations must be at least 1"));
            }
        }
        for (k, pair) in self.stages.windows(2).enumerate() {
            let (prev, next) = (pair[0].swarm_count, pair[1].swarm_count);
            if next > prev {
                out.push(format!(
                    "stage_plan[{}].swarm_count ({next}) exceeds the previous stage ({prev})",
                    k + 1
                ));
            } else if next > 0 && prev % next != 0 {
                out.push(format!(
                    "stage_plan[{}].swarm_count ({next}) does not divide the previous stage ({prev})",
                    k + 1
                ));
            }
        }
        let last = self.stages.len() - 1;
        if self.stages[last].swarm_count != 1 {
            out.push(format!(
                "stage_plan[{last}].swarm_count must be 1 in the final stage, got {}",
                self.stages[last].swarm_count
            ));
        }
        let first = self.stages[0].swarm_count;
        if first > 0 && (population_size < first || !population_size.is_multiple_of(first)) {
            out.push(format!(
                "population_size ({population_size}) is not divisible into {first} equal swarms"
            ));
        }
        if let Some(t_max) = t_max {
            let total = self.total_iterations();
            if total != t_max {
                out.push(format!(
                    "stage_plan iterations sum to {total}, expected t_max = {t_max}"
                ));
            }
        }
        out
    }

    pub fn validate(&self, population_size: usize) -> Result<()> {
        match self.violations(population_size, None).as_slice() {
            [] => Ok(()),
            v => Err(Error::config(v.join("; "))),
        }
    }
}
