//! Derivative-free compass search, used to probe and polish the well proxy.

use crate::domain::SearchSpace;

#[derive(Debug, Clone, Copy)]
pub struct CompassOptions {
    /// Initial step as a fraction of each dimension's range.
    pub initial_step: f64,
    /// Stop once the step fraction falls below this.
    pub min_step: f64,
    pub max_evals: usize,
}

impl Default for CompassOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            min_step: 1e-6,
            max_evals: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompassResult {
    pub position: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` from `start` by polling ±step along each axis, keeping any
/// improvement and halving the step after a sweep without one.
pub fn compass_search<F>(
    f: F,
    start: &[f64],
    space: &SearchSpace,
    opts: &CompassOptions,
) -> CompassResult
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut evals = 1;
    let mut step = opts.initial_step;
    'outer: while step >= opts.min_step {
        let mut improved = false;
        for d in 0..x.len() {
            let (lo, hi) = (space.lower()[d], space.upper()[d]);
            let delta = step * (hi - lo);
            for dir in [1.0, -1.0] {
                if evals >= opts.max_evals {
                    break 'outer;
                }
                let old = x[d];
                let trial = (old + dir * delta).clamp(lo, hi);
                if trial == old {
                    continue;
                }
                x[d] = trial;
                let ft = f(&x);
                evals += 1;
                if ft < fx {
                    fx = ft;
                    improved = true;
                    break;
                }
                x[d] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    CompassResult {
        position: x,
        value: fx,
        evaluations: evals,
    }
}
