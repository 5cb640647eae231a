use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bests::{apply_fitness, check_finite, collapse_swarms, evaluate_positions, partition};
use super::kernel::{position_update, velocity_update};
use super::{IterationRecord, Objective, RunFailure, RunHistory, StagePlan};
use crate::domain::{init_population, SearchSpace, Swarm};
use crate::error::{Error, Result};
use crate::rng::{CounterRng, DrawSource, RngStreamKey};
use crate::schedules::{coefficients_at, IterationClock, ScheduleSpec};

/// Everything that determines a run besides the objective and the space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub population_size: usize,
    pub stage_plan: StagePlan,
    pub schedule: ScheduleSpec,
    pub seed: u64,
    /// Evaluate positions on the ambient rayon pool. Does not affect results.
    #[serde(skip)]
    pub parallel: bool,
    pub record_particles: bool,
}

impl RunSettings {
    pub fn new(
        population_size: usize,
        stage_plan: StagePlan,
        schedule: ScheduleSpec,
        seed: u64,
    ) -> Self {
        Self {
            population_size,
            stage_plan,
            schedule,
            seed,
            parallel: false,
            record_particles: false,
        }
    }

    pub fn t_max(&self) -> usize {
        self.stage_plan.total_iterations()
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = self.stage_plan.violations(self.population_size, None);
        v.extend(self.schedule.violations());
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::config(v.join("; ")))
        }
    }
}

/// Hex SHA-256 over the inputs that shape a trajectory (seed and
/// parallelism excluded).
pub fn config_digest(objective_name: &str, space: &SearchSpace, settings: &RunSettings) -> String {
    #[derive(Serialize)]
    struct DigestInput<'a> {
        objective: &'a str,
        space: &'a SearchSpace,
        population_size: usize,
        stage_plan: &'a StagePlan,
        schedule: &'a ScheduleSpec,
        record_particles: bool,
    }
    let input = DigestInput {
        objective: objective_name,
        space,
        population_size: settings.population_size,
        stage_plan: &settings.stage_plan,
        schedule: &settings.schedule,
        record_particles: settings.record_particles,
    };
    let bytes = serde_json::to_vec(&input).expect("digest input serializes");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunState {
    pub swarms: Vec<Swarm>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: f64,
    pub clock: IterationClock,
    pub eval_count: u64,
}

impl RunState {
    pub fn new(swarms: Vec<Swarm>, clock: IterationClock) -> Self {
        let mut state = Self {
            swarms,
            gbest_position: Vec::new(),
            gbest_fitness: f64::INFINITY,
            clock,
            eval_count: 0,
        };
        state.refresh_gbest();
        state
    }

    /// gbest = lowest sbest, ties to the lowest swarm index.
    pub fn refresh_gbest(&mut self) {
        let best = self
            .swarms
            .iter()
            .min_by(|a, b| a.sbest_fitness.total_cmp(&b.sbest_fitness));
        if let Some(best) = best {
            self.gbest_fitness = best.sbest_fitness;
            self.gbest_position.clone_from(&best.sbest_position);
        }
    }

    pub fn particle_count(&self) -> usize {
        self.swarms.iter().map(Swarm::len).sum()
    }

    pub fn sbest_fitness(&self) -> Vec<f64> {
        self.swarms.iter().map(|s| s.sbest_fitness).collect()
    }

    /// Replaces the swarms by `target_count` merged ones.
    pub fn collapse(&mut self, target_count: usize) -> Result<()> {
        let swarms = std::mem::take(&mut self.swarms);
        self.swarms = collapse_swarms(swarms, target_count)?;
        Ok(())
    }
}

/// One configured optimizer over one objective.
pub struct Engine<'a, O: ?Sized, D = CounterRng> {
    space: &'a SearchSpace,
    objective: &'a O,
    schedule: ScheduleSpec,
    seed: u64,
    draws: D,
    vmax: Vec<f64>,
    parallel: bool,
    record_particles: bool,
}

impl<'a, O: Objective + ?Sized> Engine<'a, O, CounterRng> {
    pub fn new(
        space: &'a SearchSpace,
        objective: &'a O,
        schedule: ScheduleSpec,
        seed: u64,
    ) -> Self {
        Self {
            space,
            objective,
            schedule,
            seed,
            draws: CounterRng,
            vmax: space.vmax(),
            parallel: false,
            record_particles: false,
        }
    }
}

impl<'a, O: Objective + ?Sized, D: DrawSource> Engine<'a, O, D> {
    /// Swaps the source of `r1`/`r2` factors.
    pub fn with_draws<D2: DrawSource>(self, draws: D2) -> Engine<'a, O, D2> {
        Engine {
            space: self.space,
            objective: self.objective,
            schedule: self.schedule,
            seed: self.seed,
            draws,
            vmax: self.vmax,
            parallel: self.parallel,
            record_particles: self.record_particles,
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn record_particles(mut self, on: bool) -> Self {
        self.record_particles = on;
        self
    }

    /// Seeds the population, splits it into `swarm_count` blocks and runs the
    /// initial evaluation pass.
    pub fn initialize(
        &self,
        population_size: usize,
        swarm_count: usize,
        t_max: usize,
    ) -> Result<RunState> {
        let clock = IterationClock::new(0, t_max)?;
        let particles = init_population(self.space, population_size, self.seed)?;
        let mut state = RunState::new(partition(particles, swarm_count)?, clock);
        self.evaluate(&mut state)?;
        Ok(state)
    }

    fn evaluate(&self, state: &mut RunState) -> Result<Vec<f64>> {
        let positions: Vec<&[f64]> = state
            .swarms
            .iter()
            .flat_map(|s| s.particles.iter().map(|p| p.position.as_slice()))
            .collect();
        let fitness = evaluate_positions(&positions, self.objective, self.parallel);
        check_finite(state.swarms.iter().flat_map(|s| &s.particles), &fitness)?;
        let mut offset = 0;
        for swarm in &mut state.swarms {
            let n = swarm.len();
            apply_fitness(swarm, &fitness[offset..offset + n]);
            offset += n;
        }
        state.eval_count += fitness.len() as u64;
        state.refresh_gbest();
        Ok(fitness)
    }

    /// Advances every particle by one iteration and re-evaluates.
    pub fn step(&self, state: &mut RunState) -> Result<IterationRecord> {
        if state.clock.is_done() {
            return Err(Error::config(format!(
                "run already finished at t = {}",
                state.clock.t
            )));
        }
        let coefficients = coefficients_at(&self.schedule, state.clock)?;
        let multi_swarm = state.swarms.len() > 1;
        let t = state.clock.t as i64;
        for swarm in &mut state.swarms {
            let attractor = if multi_swarm {
                swarm.sbest_position.clone()
            } else {
                state.gbest_position.clone()
            };
            for particle in &mut swarm.particles {
                let key = RngStreamKey::new(self.seed, t, particle.id, 0, 0);
                particle.velocity = velocity_update(
                    particle,
                    &attractor,
                    &coefficients,
                    &self.vmax,
                    &self.draws,
                    key,
                );
                position_update(particle, self.space);
            }
        }
        self.evaluate(state)?;
        state.clock.t += 1;

        let particle_fitness = self.record_particles.then(|| {
            let mut by_id: Vec<(usize, f64)> = state
                .swarms
                .iter()
                .flat_map(|s| s.particles.iter().map(|p| (p.id, p.fitness)))
                .collect();
            by_id.sort_by_key(|&(id, _)| id);
            by_id.into_iter().map(|(_, f)| f).collect()
        });
        Ok(IterationRecord {
            t: state.clock.t,
            gbest_fitness: state.gbest_fitness,
            sbest_fitness: state.sbest_fitness(),
            coefficients,
            eval_count: state.eval_count,
            particle_fitness,
        })
    }
}

/// Full staged run: initialize, evaluate, then step through every stage,
/// collapsing swarms at each boundary.
pub fn run<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    settings: &RunSettings,
) -> Result<RunHistory, RunFailure> {
    run_observed(space, objective, settings, |_| {})
}

/// [`run`], calling `observe` with each record as soon as it is produced.
pub fn run_observed<O, F>(
    space: &SearchSpace,
    objective: &O,
    settings: &RunSettings,
    mut observe: F,
) -> Result<RunHistory, RunFailure>
where
    O: Objective + ?Sized,
    F: FnMut(&IterationRecord),
{
    let t_max = settings.t_max();
    let mut history = RunHistory {
        seed: settings.seed,
        config_digest: config_digest(&objective.name(), space, settings),
        population_size: settings.population_size,
        t_max,
        stage_plan: settings.stage_plan.clone(),
        schedule: settings.schedule,
        initial_gbest_fitness: None,
        records: Vec::with_capacity(t_max),
        gbest_position: Vec::new(),
        gbest_fitness: None,
        eval_count: 0,
    };
    let fail = |error: Error, history: RunHistory| RunFailure {
        error,
        history: Box::new(history),
    };
    if let Err(e) = settings.validate() {
        return Err(fail(e, history));
    }

    let engine = Engine::new(space, objective, settings.schedule, settings.seed)
        .parallel(settings.parallel)
        .record_particles(settings.record_particles);
    let mut state = match engine.initialize(
        settings.population_size,
        settings.stage_plan.initial_swarm_count(),
        t_max,
    ) {
        Ok(state) => state,
        Err(e) => {
            if matches!(e, Error::NonFinite { .. }) {
                history.eval_count = settings.population_size as u64;
            }
            return Err(fail(e, history));
        }
    };
    history.initial_gbest_fitness = Some(state.gbest_fitness);

    for stage in &settings.stage_plan.stages {
        if let Err(e) = state.collapse(stage.swarm_count) {
            return Err(fail(e, finish(history, &state)));
        }
        for _ in 0..stage.iterations {
            match engine.step(&mut state) {
                Ok(record) => {
                    observe(&record);
                    history.records.push(record);
                }
                Err(e) => {
                    // the failed iteration's evaluations were still spent
                    state.eval_count += settings.population_size as u64;
                    return Err(fail(e, finish(history, &state)));
                }
            }
        }
    }
    Ok(finish(history, &state))
}

fn finish(mut history: RunHistory, state: &RunState) -> RunHistory {
    history.gbest_position.clone_from(&state.gbest_position);
    history.gbest_fitness = Some(state.gbest_fitness);
    history.eval_count = state.eval_count;
    history
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn settings(plan: &[(usize, usize)], schedule: ScheduleSpec, seed: u64) -> RunSettings {
        RunSettings::new(40, StagePlan::from_pairs(plan), schedule, seed)
    }

    #[test]
    fn canonical_budget() {
        let space = SearchSpace::uniform(5, -5.12, 5.12).unwrap();
        let h = run(
            &space,
            &sphere,
            &settings(&[(1, 125)], ScheduleSpec::constant(), 1),
        )
        .unwrap();
        assert_eq!(h.records.len(), 125);
        assert_eq!(h.eval_count, 40 * 126);
        assert_eq!(h.post_init_evaluations(), 5000);
    }

    #[test]
    fn staged_runs_report_swarm_counts() {
        let space = SearchSpace::uniform(3, -5.12, 5.12).unwrap();
        let h = run(
            &space,
            &sphere,
            &settings(
                &[(8, 25), (4, 25), (2, 25), (1, 50)],
                ScheduleSpec::tvac(),
                3,
            ),
        )
        .unwrap();
        let counts: Vec<usize> = h.records.iter().map(|r| r.sbest_fitness.len()).collect();
        assert_eq!(counts[0], 8);
        assert_eq!(counts[24], 8);
        assert_eq!(counts[25], 4);
        assert_eq!(counts[50], 2);
        assert_eq!(counts[75], 1);
        assert_eq!(counts[124], 1);
        for w in h.records.windows(2) {
            assert!(w[1].gbest_fitness <= w[0].gbest_fitness);
        }
    }

    #[test]
    fn gbest_is_min_over_sbest() {
        let space = SearchSpace::uniform(4, -5.12, 5.12).unwrap();
        let h = run(
            &space,
            &sphere,
            &settings(&[(5, 10), (1, 10)], ScheduleSpec::constant(), 9),
        )
        .unwrap();
        for r in &h.records {
            let m = r
                .sbest_fitness
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            assert_eq!(m, r.gbest_fitness);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let space = SearchSpace::uniform(6, -5.12, 5.12).unwrap();
        let mut s = settings(&[(8, 5), (2, 5), (1, 5)], ScheduleSpec::tvac(), 11);
        let a = run(&space, &sphere, &s).unwrap();
        s.parallel = true;
        let b = run(&space, &sphere, &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_plan_fails_before_evaluating() {
        let space = SearchSpace::unit(2);
        let counter = std::sync::atomic::AtomicUsize::new(0);
        let f = |x: &[f64]| {
            counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            x[0]
        };
        let err = run(
            &space,
            &f,
            &settings(&[(3, 5), (1, 5)], ScheduleSpec::constant(), 1),
        )
        .unwrap_err();
        assert!(matches!(err.error, Error::Config(_)));
        assert_eq!(counter.load(std::sync::atomic::Ordering::Relaxed), 0);
    }

    #[test]
    fn evaluation_failure_keeps_partial_history() {
        let space = SearchSpace::uniform(1, -1.0, 1.0).unwrap();
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let f = |x: &[f64]| {
            let n = calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            if n >= 40 * 4 {
                f64::INFINITY
            } else {
                x[0] * x[0]
            }
        };
        let err = run(
            &space,
            &f,
            &settings(&[(1, 10)], ScheduleSpec::constant(), 2),
        )
        .unwrap_err();
        assert!(matches!(err.error, Error::NonFinite { .. }));
        assert_eq!(err.history.records.len(), 3);
        assert_eq!(err.history.eval_count, 40 * 5);
    }

    #[test]
    fn step_after_end_is_rejected() {
        let space = SearchSpace::unit(1);
        let engine = Engine::new(&space, &sphere, ScheduleSpec::constant(), 0);
        let mut state = engine.initialize(4, 1, 1).unwrap();
        engine.step(&mut state).unwrap();
        assert!(engine.step(&mut state).is_err());
    }

    #[test]
    fn digest_ignores_seed_and_parallelism() {
        let space = SearchSpace::unit(2);
        let a = settings(&[(1, 10)], ScheduleSpec::constant(), 1);
        let mut b = a.clone();
        b.seed = 2;
        b.parallel = true;
        assert_eq!(
            config_digest("f", &space, &a),
            config_digest("f", &space, &b)
        );
        let c = settings(&[(1, 10)], ScheduleSpec::ldiw(), 1);
        assert_ne!(
            config_digest("f", &space, &a),
            config_digest("f", &space, &c)
        );
    }
}
