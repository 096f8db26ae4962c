pub mod export;
pub mod perturb;
pub mod quadric;
pub mod skew;
pub mod stratum;
pub mod transversals;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `N` points uniform in `[-1, 1)^3` drawn from `seed`.
pub fn random_points<const N: usize>(seed: u64) -> [[f64; 3]; N] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
}
