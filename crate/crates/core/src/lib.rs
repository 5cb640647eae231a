//! Particle swarm optimizers with coefficient schedules and staged multi-swarm
//! collapse, plus the benchmark objectives they are evaluated on.
//!
//! ```
//! use ms2pso_core::{run, Problem, RunSettings, ScheduleSpec, StagePlan};
//!
//! let problem = Problem::benchmark("sphere", 5).unwrap();
//! let plan = StagePlan::from_pairs(&[(4, 10), (2, 10), (1, 20)]);
//! let settings = RunSettings::new(20, plan, ScheduleSpec::tvac(), 7);
//! let history = run(problem.space(), &problem, &settings).unwrap();
//! assert_eq!(history.records.len(), 40);
//! ```

pub mod domain;
pub mod engine;
pub mod error;
pub mod objectives;
pub mod rng;
pub mod schedules;

pub use domain::{
    clamp_to_bounds, init_population, Particle, ProductionTotals, SearchSpace, Swarm,
};
pub use engine::{
    collapse_swarms, config_digest, evaluate_and_update_bests, partition, position_update, run,
    run_observed, velocity_update, Engine, IterationRecord, Objective, RunFailure, RunHistory,
    RunSettings, RunState, Stage, StagePlan,
};
pub use error::{Error, Result};
pub use objectives::{
    eval_benchmark, wcf, well_proxy_eval, Benchmark, ObjectiveSpec, Problem, Sense,
    WellProxyConfig, WellProxyModel,
};
pub use rng::{draw_uniform, CounterRng, DrawSource, RngStreamKey};
pub use schedules::{
    coefficients_at, ldiw_weight, tvac_coeffs, Coefficients, IterationClock, ScheduleKind,
    ScheduleSpec,
};
