//! Shared fixtures for the benchmarks.

use humancomp::prg::Seed;
use humancomp::stats::trial_rng;
use humancomp::{Alphabet, KeyMap};
use rand::Rng;

pub fn letter_key(seed: u64) -> KeyMap {
    KeyMap::random(Alphabet::LATIN, &mut trial_rng(seed, 0))
}

pub fn digit_key(seed: u64) -> KeyMap {
    KeyMap::random(Alphabet::Digits, &mut trial_rng(seed, 0))
}

pub fn challenge(len: usize, seed: u64) -> String {
    let mut rng = trial_rng(seed, 1);
    (0..len).map(|_| char::from(b'A' + rng.random_range(0..26u8))).collect()
}

pub fn seed(n: usize, seed: u64) -> Seed {
    Seed::random(n, &mut trial_rng(seed, 2))
}
