//! Search space, particles, swarms and production totals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{draw_uniform, RngStreamKey, INIT_ITERATION};

/// Fraction of each dimension's range used as the velocity cap.
pub const VMAX_FRACTION: f64 = 0.5;

/// Axis-aligned box of real decision variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawSpace> for SearchSpace {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self> {
        SearchSpace::new(raw.lower, raw.upper)
    }
}

impl From<SearchSpace> for RawSpace {
    fn from(space: SearchSpace) -> Self {
        RawSpace {
            lower: space.lower,
            upper: space.upper,
        }
    }
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::config(
                "search space must have at least one dimension",
            ));
        }
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bound length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::config(format!(
                    "dimension {d}: bounds must be finite"
                )));
            }
            if lo >= hi {
                return Err(Error::config(format!(
                    "dimension {d}: lower bound {lo} is not below upper bound {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Same `[lower, upper]` interval in every dimension.
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub fn unit(dimension: usize) -> Self {
        Self::uniform(dimension, 0.0, 1.0).expect("unit box is valid")
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn vmax(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| VMAX_FRACTION * (hi - lo))
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// One candidate solution. Fitness follows the minimization convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    /// Population-wide index; keys this particle's random draws.
    pub id: usize,
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Fitness at `position` from the latest evaluation (`+inf` before the first).
    pub fitness: f64,
    pub pbest_position: Vec<f64>,
    /// `+inf` until the first evaluation.
    pub pbest_fitness: f64,
}

impl Particle {
    pub fn at(id: usize, position: Vec<f64>) -> Self {
        let dim = position.len();
        Self {
            id,
            pbest_position: position.clone(),
            position,
            velocity: vec![0.0; dim],
            fitness: f64::INFINITY,
            pbest_fitness: f64::INFINITY,
        }
    }

    pub fn dimension(&self) -> usize {
        self.position.len()
    }
}

/// Uniform random positions, zero velocities, pbest at the start point.
pub fn init_population(space: &SearchSpace, count: usize, seed: u64) -> Result<Vec<Particle>> {
    if count == 0 {
        return Err(Error::config("population size must be at least 1"));
    }
    let particles = (0..count)
        .map(|i| {
            let position = (0..space.dimension())
                .map(|d| {
                    let u = draw_uniform(&RngStreamKey::new(seed, INIT_ITERATION, i, d, 0));
                    let (lo, hi) = (space.lower[d], space.upper[d]);
                    (lo + u * (hi - lo)).min(hi)
                })
                .collect();
            Particle::at(i, position)
        })
        .collect();
    Ok(particles)
}

/// Moves out-of-range components onto the violated bound and zeroes their velocity.
pub fn clamp_to_bounds(particle: &mut Particle, space: &SearchSpace) {
    for d in 0..particle.position.len() {
        let x = particle.position[d];
        if x < space.lower[d] {
            particle.position[d] = space.lower[d];
            particle.velocity[d] = 0.0;
        } else if x > space.upper[d] {
            particle.position[d] = space.upper[d];
            particle.velocity[d] = 0.0;
        }
    }
}

/// A sub-population and its best remembered position.
#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub id: usize,
    pub particles: Vec<Particle>,
    pub sbest_position: Vec<f64>,
    pub sbest_fitness: f64,
}

impl Swarm {
    pub fn new(id: usize, particles: Vec<Particle>) -> Self {
        let mut swarm = Self {
            id,
            particles,
            sbest_position: Vec::new(),
            sbest_fitness: f64::INFINITY,
        };
        swarm.refresh_best();
        swarm
    }

    /// Recomputes sbest as the minimum member pbest, ties going to the lowest particle id.
    pub fn refresh_best(&mut self) {
        let best = self.particles.iter().min_by(|a, b| {
            a.pbest_fitness
                .total_cmp(&b.pbest_fitness)
                .then(a.id.cmp(&b.id))
        });
        if let Some(best) = best {
            self.sbest_fitness = best.pbest_fitness;
            self.sbest_position = best.pbest_position.clone();
        }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }
}

/// Field-level cumulative volumes over the production horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductionTotals {
    /// Oil produced.
    pub q_op: f64,
    /// Water produced.
    pub q_wp: f64,
    /// Water injected.
    pub q_wi: f64,
}

impl ProductionTotals {
    pub fn new(q_op: f64, q_wp: f64, q_wi: f64) -> Result<Self> {
        let totals = Self { q_op, q_wp, q_wi };
        totals.validate()?;
        Ok(totals)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("q_op", self.q_op),
            ("q_wp", self.q_wp),
            ("q_wi", self.q_wi),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Evaluation(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}
