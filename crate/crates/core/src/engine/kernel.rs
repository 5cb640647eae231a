//! Velocity and position updates for a single particle.

use crate::domain::{clamp_to_bounds, Particle, SearchSpace};
use crate::rng::{DrawSource, RngStreamKey, SLOT_COGNITIVE, SLOT_SOCIAL};
use crate::schedules::Coefficients;

/// New velocity for `particle`, pulled towards its pbest and towards
/// `attractor` (the swarm best in multi-swarm stages, the global best
/// otherwise). `r1`/`r2` come from `draws` at `key_base` with the dimension
/// and slot filled in. Each component is capped at `±vmax[d]`.
pub fn velocity_update<D: DrawSource + ?Sized>(
    particle: &Particle,
    attractor: &[f64],
    coeffs: &Coefficients,
    vmax: &[f64],
    draws: &D,
    key_base: RngStreamKey,
) -> Vec<f64> {
    let dim = particle.dimension();
    assert_eq!(attractor.len(), dim, "attractor dimension mismatch");
    assert_eq!(vmax.len(), dim, "vmax dimension mismatch");
    assert_eq!(particle.velocity.len(), dim, "velocity dimension mismatch");
    assert_eq!(
        particle.pbest_position.len(),
        dim,
        "pbest dimension mismatch"
    );

    let Coefficients { omega, c1, c2 } = *coeffs;
    (0..dim)
        .map(|d| {
            let key = key_base.with_dimension(d);
            let r1 = draws.draw(&key.with_slot(SLOT_COGNITIVE));
            let r2 = draws.draw(&key.with_slot(SLOT_SOCIAL));
            let x = particle.position[d];
            let v = omega * particle.velocity[d]
                + c1 * r1 * (particle.pbest_position[d] - x)
                + c2 * r2 * (attractor[d] - x);
            v.clamp(-vmax[d], vmax[d])
        })
        .collect()
}

/// `x += v`, then clamp to the box.
pub fn position_update(particle: &mut Particle, space: &SearchSpace) {
    for (x, v) in particle.position.iter_mut().zip(&particle.velocity) {
        *x += v;
    }
    clamp_to_bounds(particle, space);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn particle(x: f64, v: f64, pbest: f64) -> Particle {
        let mut p = Particle::at(0, vec![x]);
        p.velocity = vec![v];
        p.pbest_position = vec![pbest];
        p
    }

    fn coeffs(omega: f64, c1: f64, c2: f64) -> Coefficients {
        Coefficients { omega, c1, c2 }
    }

    #[test]
    fn pure_inertia() {
        let p = particle(0.5, 0.3, 0.1);
        let v = velocity_update(
            &p,
            &[0.9],
            &coeffs(1.0, 0.0, 0.0),
            &[10.0],
            &CounterRng,
            RngStreamKey::new(1, 0, 0, 0, 0),
        );
        assert_eq!(v, vec![0.3]);
    }

    #[test]
    fn coincident_attractors_leave_only_inertia() {
        let p = particle(0.4, -0.2, 0.4);
        let v = velocity_update(
            &p,
            &[0.4],
            &coeffs(0.7, 2.0, 2.0),
            &[10.0],
            &CounterRng,
            RngStreamKey::new(5, 3, 0, 0, 0),
        );
        assert_eq!(v, vec![0.7 * -0.2]);
    }

    #[test]
    fn hand_arithmetic_with_injected_draws() {
        let draws = |k: &RngStreamKey| if k.slot == SLOT_COGNITIVE { 0.5 } else { 0.25 };
        let p = particle(0.5, 0.1, 0.7);
        let v = velocity_update(
            &p,
            &[0.9],
            &coeffs(0.5, 2.0, 2.0),
            &[10.0],
            &draws,
            RngStreamKey::new(0, 0, 0, 0, 0),
        );
        // 0.05 + 2*0.5*0.2 + 2*0.25*0.4
        assert!((v[0] - 0.45).abs() < 1e-12, "{}", v[0]);
    }

    #[test]
    fn velocity_is_capped() {
        let draws = |_: &RngStreamKey| 0.99;
        let p = particle(0.0, 0.0, 1.0);
        let v = velocity_update(
            &p,
            &[1.0],
            &coeffs(0.7, 2.0, 2.0),
            &[0.5],
            &draws,
            RngStreamKey::new(0, 0, 0, 0, 0),
        );
        assert_eq!(v, vec![0.5]);
        let p = particle(1.0, 0.0, 0.0);
        let v = velocity_update(
            &p,
            &[0.0],
            &coeffs(0.7, 2.0, 2.0),
            &[0.5],
            &draws,
            RngStreamKey::new(0, 0, 0, 0, 0),
        );
        assert_eq!(v, vec![-0.5]);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mismatched_attractor_panics() {
        let p = particle(0.0, 0.0, 0.0);
        velocity_update(
            &p,
            &[0.0, 1.0],
            &coeffs(1.0, 1.0, 1.0),
            &[1.0],
            &CounterRng,
            RngStreamKey::new(0, 0, 0, 0, 0),
        );
    }

    #[test]
    fn position_moves_by_velocity() {
        let space = SearchSpace::unit(1);
        let mut p = particle(0.2, 0.1, 0.2);
        position_update(&mut p, &space);
        assert!((p.position[0] - 0.3).abs() < 1e-15);
        assert_eq!(p.velocity, vec![0.1]);
    }

    #[test]
    fn position_clamps_at_wall() {
        let space = SearchSpace::unit(1);
        let mut p = particle(0.95, 0.2, 0.2);
        position_update(&mut p, &space);
        assert_eq!(p.position, vec![1.0]);
        assert_eq!(p.velocity, vec![0.0]);
    }

    #[test]
    fn zero_velocity_is_identity() {
        let space = SearchSpace::unit(3);
        let mut p = Particle::at(0, vec![0.1, 0.5, 0.9]);
        position_update(&mut p, &space);
        assert_eq!(p.position, vec![0.1, 0.5, 0.9]);
    }
}
