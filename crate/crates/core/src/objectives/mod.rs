//! Objective functions: analytic benchmarks and the well placement/control proxy.

mod benchmarks;
mod fixture;
mod local_search;
mod wcf;
mod well_proxy;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use benchmarks::{eval_benchmark, Benchmark};
pub use fixture::KeyValueFile;
pub use local_search::{compass_search, CompassOptions, CompassResult};
pub use wcf::{wcf, wcf_weighted, WATER_WEIGHT};
pub use well_proxy::{
    well_proxy_eval, ReferenceOptimum, SweetSpot, WellProxyConfig, WellProxyModel, DEFAULT_FIXTURE,
};

use crate::domain::SearchSpace;
use crate::engine::Objective;
use crate::error::Result;

pub const WELL_PROXY_NAME: &str = "well_proxy";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Raw objective value to engine fitness (always minimized).
    pub fn to_fitness(self, raw: f64) -> f64 {
        match self {
            Sense::Minimize => raw,
            Sense::Maximize => -raw,
        }
    }

    pub fn to_raw(self, fitness: f64) -> f64 {
        self.to_fitness(fitness)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub name: String,
    pub dimension: usize,
    pub space: SearchSpace,
    pub sense: Sense,
    pub known_optimum: Option<f64>,
}

#[derive(Debug, Clone)]
enum Evaluator {
    Benchmark(Benchmark),
    WellProxy(Arc<WellProxyModel>),
}

/// An objective bound to its search space and sense.
#[derive(Debug, Clone)]
pub struct Problem {
    spec: ObjectiveSpec,
    evaluator: Evaluator,
}

impl Problem {
    /// Benchmark on its conventional domain.
    pub fn benchmark(name: &str, dimension: usize) -> Result<Self> {
        let bench = Benchmark::from_name(name)?;
        let (lo, hi) = bench.bounds();
        Self::benchmark_in(name, SearchSpace::uniform(dimension, lo, hi)?)
    }

    pub fn benchmark_in(name: &str, space: SearchSpace) -> Result<Self> {
        let bench = Benchmark::from_name(name)?;
        Ok(Self {
            spec: ObjectiveSpec {
                name: bench.name().to_string(),
                dimension: space.dimension(),
                space,
                sense: Sense::Minimize,
                known_optimum: Some(0.0),
            },
            evaluator: Evaluator::Benchmark(bench),
        })
    }

    pub fn well_proxy(model: WellProxyModel) -> Self {
        let space = model.space();
        Self {
            spec: ObjectiveSpec {
                name: WELL_PROXY_NAME.to_string(),
                dimension: space.dimension(),
                space,
                sense: Sense::Maximize,
                known_optimum: None,
            },
            evaluator: Evaluator::WellProxy(Arc::new(model)),
        }
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn space(&self) -> &SearchSpace {
        &self.spec.space
    }

    pub fn sense(&self) -> Sense {
        self.spec.sense
    }

    /// Value in the objective's own sense. NaN if the point is unusable.
    pub fn raw_value(&self, x: &[f64]) -> f64 {
        match &self.evaluator {
            Evaluator::Benchmark(b) => b.eval(x),
            Evaluator::WellProxy(m) => well_proxy_eval(x, m).unwrap_or(f64::NAN),
        }
    }
}

impl Objective for Problem {
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.spec.sense.to_fitness(self.raw_value(x))
    }

    fn name(&self) -> String {
        self.spec.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximize_objectives_are_negated() {
        let p = Problem::well_proxy(WellProxyModel::default_fixture());
        let x = vec![0.5; 90];
        assert_eq!(p.evaluate(&x), -p.raw_value(&x));
        assert_eq!(p.sense().to_raw(p.evaluate(&x)), p.raw_value(&x));
        assert_eq!(p.space().dimension(), 90);
    }

    #[test]
    fn benchmark_problem_uses_canonical_domain() {
        let p = Problem::benchmark("rastrigin", 30).unwrap();
        assert_eq!(p.space().lower()[0], -5.12);
        assert_eq!(p.evaluate(&vec![0.0; 30]), 0.0);
        assert!(Problem::benchmark("nope", 3).is_err());
    }
}
