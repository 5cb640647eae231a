//! Counter-based uniform draws.
//!
//! Every random number used by the optimizer is a pure function of a
//! [`RngStreamKey`]. There is no generator state to thread through the run,
//! so evaluation order and thread scheduling cannot change a trajectory.

/// Iteration value reserved for the initialization draws.
pub const INIT_ITERATION: i64 = -1;
/// Draw slot for the cognitive random factor `r1`.
pub const SLOT_COGNITIVE: u32 = 0;
/// Draw slot for the social random factor `r2`.
pub const SLOT_SOCIAL: u32 = 1;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Coordinates of a single draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStreamKey {
    pub seed: u64,
    pub iteration: i64,
    pub particle: u64,
    pub dimension: u64,
    pub slot: u32,
}

impl RngStreamKey {
    pub fn new(seed: u64, iteration: i64, particle: usize, dimension: usize, slot: u32) -> Self {
        Self {
            seed,
            iteration,
            particle: particle as u64,
            dimension: dimension as u64,
            slot,
        }
    }

    pub fn with_dimension(self, dimension: usize) -> Self {
        Self {
            dimension: dimension as u64,
            ..self
        }
    }

    pub fn with_slot(self, slot: u32) -> Self {
        Self { slot, ..self }
    }
}

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes the key to 64 bits. Each field is absorbed through one bijective
/// round, so two keys that differ only in their last field never collide.
#[inline]
pub fn key_hash(key: &RngStreamKey) -> u64 {
    let words = [
        key.iteration as u64,
        key.particle,
        key.dimension,
        u64::from(key.slot),
    ];
    let mut h = mix(key.seed ^ GOLDEN);
    for (round, word) in words.iter().enumerate() {
        let salt = GOLDEN.wrapping_mul(round as u64 + 2);
        h = mix(h ^ word.wrapping_add(salt));
    }
    h
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
#[inline]
pub fn draw_uniform(key: &RngStreamKey) -> f64 {
    (key_hash(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Source of the `r1`/`r2` factors used by the velocity kernel.
///
/// The engine uses [`CounterRng`]; tests can inject fixed draws.
pub trait DrawSource: Sync {
    fn draw(&self, key: &RngStreamKey) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CounterRng;

impl DrawSource for CounterRng {
    #[inline]
    fn draw(&self, key: &RngStreamKey) -> f64 {
        draw_uniform(key)
    }
}

impl<F> DrawSource for F
where
    F: Fn(&RngStreamKey) -> f64 + Sync,
{
    fn draw(&self, key: &RngStreamKey) -> f64 {
        self(key)
    }
}
