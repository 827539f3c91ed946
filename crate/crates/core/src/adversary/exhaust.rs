//! Seed exhaustion: a string is generator-consistent iff some seed produces it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::keys::KeyMap;
use crate::prg::{generate_into, key_array, render_digits, Generator};

pub const DEFAULT_SEED_BUDGET: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PseudorandomConsistent,
    NoSeedFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustReport {
    pub verdict: Verdict,
    pub seeds_tried: u64,
    /// First generating seed in lexicographic order.
    pub seed: Option<String>,
}

/// Searches `{0..4}^n` in lexicographic order, stopping at the first seed that
/// generates `candidate`.
pub fn exhaust_seeds(candidate: &[u8], key: &KeyMap, n: usize, generator: Generator, budget: f64) -> Result<ExhaustReport> {
    let required = 5f64.powi(n as i32);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    if n == 0 {
        return Err(Error::Empty("seed"));
    }
    let k = key_array(key);
    let total = 5u64.pow(n as u32);
    let mut seed = vec![0u8; n];
    let mut out = Vec::new();
    for tried in 0..total {
        let mut i = tried;
        for d in seed.iter_mut().rev() {
            *d = (i % 5) as u8;
            i /= 5;
        }
        generate_into(generator, &seed, &k, &mut out);
        if out == candidate {
            return Ok(ExhaustReport {
                verdict: Verdict::PseudorandomConsistent,
                seeds_tried: tried + 1,
                seed: Some(render_digits(&seed)),
            });
        }
    }
    Ok(ExhaustReport { verdict: Verdict::NoSeedFound, seeds_tried: total, seed: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prg::Seed;

    #[test]
    fn finds_true_output() {
        let key = KeyMap::affine_digits(3, 0);
        let seed = Seed::parse("310421").unwrap();
        let y = Generator::Prg2.generate(&seed, &key).unwrap();
        let rep = exhaust_seeds(&y, &key, 6, Generator::Prg2, DEFAULT_SEED_BUDGET).unwrap();
        assert_eq!(rep.verdict, Verdict::PseudorandomConsistent);
        assert_eq!(rep.seed.as_deref(), Some("310421"));
    }

    #[test]
    fn visits_every_seed_when_absent() {
        let key = KeyMap::affine_digits(3, 0);
        let rep = exhaust_seeds(&[9], &key, 6, Generator::Prg2, DEFAULT_SEED_BUDGET).unwrap();
        assert_eq!(rep.verdict, Verdict::NoSeedFound);
        assert_eq!(rep.seeds_tried, 15625);
        assert!(matches!(exhaust_seeds(&[0], &key, 12, Generator::Prg2, DEFAULT_SEED_BUDGET), Err(Error::Budget { .. })));
    }
}
