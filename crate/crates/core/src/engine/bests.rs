//! Fitness evaluation, pbest/sbest bookkeeping and swarm collapse.

use rayon::prelude::*;

use super::Objective;
use crate::domain::{Particle, Swarm};
use crate::error::{Error, Result};

/// Evaluates every position. Results come back in input order whether or
/// not the calls ran concurrently.
pub(crate) fn evaluate_positions<O: Objective + ?Sized>(
    positions: &[&[f64]],
    objective: &O,
    parallel: bool,
) -> Vec<f64> {
    if parallel {
        positions
            .par_iter()
            .map(|x| objective.evaluate(x))
            .collect()
    } else {
        positions.iter().map(|x| objective.evaluate(x)).collect()
    }
}

/// First non-finite fitness in particle order, as an error.
pub(crate) fn check_finite<'a>(
    particles: impl IntoIterator<Item = &'a Particle>,
    fitness: &[f64],
) -> Result<()> {
    for (p, &f) in particles.into_iter().zip(fitness) {
        if !f.is_finite() {
            return Err(Error::NonFinite {
                particle: p.id,
                position: p.position.clone(),
                value: f,
            });
        }
    }
    Ok(())
}

/// Stores fresh fitness values and applies the strict-improvement pbest rule,
/// in particle order, then recomputes sbest.
pub(crate) fn apply_fitness(swarm: &mut Swarm, fitness: &[f64]) {
    debug_assert_eq!(swarm.particles.len(), fitness.len());
    for (p, &f) in swarm.particles.iter_mut().zip(fitness) {
        p.fitness = f;
        if f < p.pbest_fitness {
            p.pbest_fitness = f;
            p.pbest_position.clone_from(&p.position);
        }
    }
    swarm.refresh_best();
}

/// Evaluates each particle of `swarm` once and updates its bests.
/// Returns the number of evaluations spent. On a non-finite value nothing is
/// updated.
pub fn evaluate_and_update_bests<O: Objective + ?Sized>(
    swarm: &mut Swarm,
    objective: &O,
    parallel: bool,
) -> Result<usize> {
    let positions: Vec<&[f64]> = swarm
        .particles
        .iter()
        .map(|p| p.position.as_slice())
        .collect();
    let fitness = evaluate_positions(&positions, objective, parallel);
    check_finite(&swarm.particles, &fitness)?;
    apply_fitness(swarm, &fitness);
    Ok(fitness.len())
}

/// Merges contiguous blocks of `len / target_count` swarms. Particle state is
/// carried over untouched; merged swarms are renumbered from zero.
pub fn collapse_swarms(swarms: Vec<Swarm>, target_count: usize) -> Result<Vec<Swarm>> {
    let current = swarms.len();
    if target_count == 0 || current == 0 || !current.is_multiple_of(target_count) {
        return Err(Error::config(format!(
            "cannot collapse {current} swarms into {target_count}"
        )));
    }
    if current == target_count {
        return Ok(swarms);
    }
    let group = current / target_count;
    let mut merged = Vec::with_capacity(target_count);
    let mut particles: Vec<Particle> = Vec::new();
    for (k, swarm) in swarms.into_iter().enumerate() {
        particles.extend(swarm.particles);
        if (k + 1) % group == 0 {
            merged.push(Swarm::new(merged.len(), std::mem::take(&mut particles)));
        }
    }
    Ok(merged)
}

/// Splits particles into `swarm_count` contiguous blocks of equal size.
pub fn partition(particles: Vec<Particle>, swarm_count: usize) -> Result<Vec<Swarm>> {
    let n = particles.len();
    if swarm_count == 0 || !n.is_multiple_of(swarm_count) || n < swarm_count {
        return Err(Error::config(format!(
            "cannot split {n} particles into {swarm_count} equal swarms"
        )));
    }
    let size = n / swarm_count;
    let mut iter = particles.into_iter();
    Ok((0..swarm_count)
        .map(|id| Swarm::new(id, iter.by_ref().take(size).collect()))
        .collect())
}
