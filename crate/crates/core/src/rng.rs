//! Seeded, splittable randomness.
//!
//! Every randomized routine derives one generator per trial from a master
//! seed and the trial index, so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
