//! The PSO engine.
//!
//! Canonical PSO, the two-stage variant and the multi-stage multi-swarm
//! variant are all the same loop driven by different [`StagePlan`]s. While
//! more than one swarm is alive each particle is attracted to its own swarm's
//! best; once the plan reaches a single swarm the attractor is the global best.

mod bests;
mod history;
mod kernel;
mod run;
mod stage;

pub use bests::{collapse_swarms, evaluate_and_update_bests, partition};
pub use history::{IterationRecord, RunFailure, RunHistory};
pub use kernel::{position_update, velocity_update};
pub use run::{config_digest, run, run_observed, Engine, RunSettings, RunState};
pub use stage::{Stage, StagePlan};

/// A function to minimize. Must be a pure function of the position.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;

    fn name(&self) -> String {
        "anonymous".to_string()
    }
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}
