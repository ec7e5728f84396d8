//! Small helpers shared by unit tests and the `--selftest` suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube_fourier::BooleanFunction;

/// Deterministic RNG used throughout tests and selftests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_function(rng: &mut ChaCha8Rng, n: usize) -> BooleanFunction {
    let values = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    BooleanFunction::from_point_values(n, values).expect("dimension in range")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
