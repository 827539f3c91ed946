//! The one-way function candidate `F_C(x) = STML_x(C)`: the challenge is fixed
//! and public, the memorized map is the input.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keys::{Alphabet, KeyMap};
use crate::schemas::stml_eval;

/// Default adversary budget, in keys evaluated.
pub const DEFAULT_INVERT_BUDGET: f64 = 1e7;

/// Work estimate quoted for exhaustive inversion at full scale; reporting only.
pub const FULL_SCALE_WORK: f64 = 1e24;

/// Attempts before [`make_instance`] gives up on covering every symbol.
const MAX_REGENERATIONS: usize = 10_000;

/// A fixed public challenge over an `N`-symbol alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwfInstance {
    pub alphabet: Alphabet,
    pub challenge: Vec<usize>,
    pub length_factor: f64,
}

/// An `N`-digit encoding of a map, in fixed alphabet order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeyString(String);

impl KeyString {
    pub fn new(digits: &str, n: usize) -> Result<KeyString> {
        if digits.chars().count() != n {
            return Err(Error::KeyLength { expected: n, found: digits.chars().count() });
        }
        if let Some(c) = digits.chars().find(|c| !c.is_ascii_digit()) {
            return Err(Error::Parse(format!("key digit `{c}`")));
        }
        Ok(KeyString(digits.to_string()))
    }

    pub fn from_map(key: &KeyMap) -> KeyString {
        KeyString(key.to_key_string())
    }

    pub fn to_map(&self, alphabet: Alphabet) -> Result<KeyMap> {
        KeyMap::from_key_string(alphabet, &self.0)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for KeyString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// `round(factor * n * ln n)`.
pub fn challenge_length(n: usize, length_factor: f64) -> usize {
    (length_factor * n as f64 * (n as f64).ln()).round() as usize
}

impl OwfInstance {
    pub fn new(alphabet: Alphabet, challenge: Vec<usize>, length_factor: f64) -> Result<OwfInstance> {
        if challenge.is_empty() {
            return Err(Error::Empty("challenge"));
        }
        if let Some(&s) = challenge.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::Domain { symbol: s.to_string(), alphabet: alphabet.id() });
        }
        Ok(OwfInstance { alphabet, challenge, length_factor })
    }

    /// Instance with a given challenge written in the alphabet's symbols.
    pub fn from_text(alphabet: Alphabet, challenge: &str) -> Result<OwfInstance> {
        let symbols = alphabet.parse(challenge, false)?;
        let factor = symbols.len() as f64 / (alphabet.size() as f64 * (alphabet.size() as f64).ln());
        OwfInstance::new(alphabet, symbols, factor)
    }

    pub fn n(&self) -> usize {
        self.alphabet.size()
    }

    pub fn challenge_text(&self) -> String {
        self.alphabet.render(&self.challenge)
    }

    pub fn covers_alphabet(&self) -> bool {
        let mut seen = vec![false; self.n()];
        self.challenge.iter().for_each(|&s| seen[s] = true);
        seen.into_iter().all(|b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<OwfInstance> {
        let inst: OwfInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        OwfInstance::new(inst.alphabet, inst.challenge, inst.length_factor)
    }
}

/// Draws a uniform challenge of length `round(factor * N ln N)`, redrawing until
/// every symbol occurs.
pub fn make_instance<R: Rng + ?Sized>(n: usize, length_factor: f64, rng: &mut R) -> Result<OwfInstance> {
    if n < 2 {
        return Err(Error::Config(format!("alphabet size must be >= 2, got {n}")));
    }
    let alphabet = Alphabet::of_size(n)?;
    let len = challenge_length(n, length_factor);
    if len < n {
        return Err(Error::Config(format!("challenge length {len} cannot cover {n} symbols")));
    }
    for _ in 0..MAX_REGENERATIONS {
        let challenge: Vec<usize> = (0..len).map(|_| rng.random_range(0..n)).collect();
        let inst = OwfInstance { alphabet, challenge, length_factor };
        if inst.covers_alphabet() {
            return Ok(inst);
        }
    }
    Err(Error::Config(format!("no covering challenge of length {len} after {MAX_REGENERATIONS} draws")))
}

pub fn eval(instance: &OwfInstance, x: &KeyMap) -> Result<Vec<u8>> {
    if x.alphabet() != instance.alphabet {
        return Err(Error::KeyLength { expected: instance.n(), found: x.images().len() });
    }
    Ok(stml_eval(&instance.challenge, x, None).0)
}

pub fn eval_key_string(instance: &OwfInstance, x: &KeyString) -> Result<Vec<u8>> {
    eval(instance, &x.to_map(instance.alphabet)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    /// Sorted preimages.
    pub preimages: Vec<KeyString>,
    pub keys_tried: u64,
    /// One STML update per challenge symbol per key.
    pub steps: u64,
}

fn key_count(digit_range: u8, n: usize) -> f64 {
    (digit_range as f64).powi(n as i32)
}

/// Digits of key number `index` in base `range`, most significant first.
fn decode(mut index: u64, range: u64, images: &mut [u8]) {
    for slot in images.iter_mut().rev() {
        *slot = (index % range) as u8;
        index /= range;
    }
}

/// Every key with digits in `0..digit_range` whose evaluation is `y`.
pub fn brute_force_invert(instance: &OwfInstance, y: &[u8], digit_range: u8, budget: f64) -> Result<InversionReport> {
    if !(1..=10).contains(&digit_range) {
        return Err(Error::Config(format!("digit range {digit_range} outside 1..=10")));
    }
    let n = instance.n();
    let total = key_count(digit_range, n);
    if total > budget {
        return Err(Error::Budget { required: total, budget });
    }
    let total = total as u64;
    let steps = total * instance.challenge.len() as u64;
    if y.len() > instance.challenge.len() || y.iter().any(|&d| d >= 5) {
        return Ok(InversionReport { preimages: Vec::new(), keys_tried: 0, steps: 0 });
    }
    let range = digit_range as u64;
    let mut preimages: Vec<KeyString> = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0u8; n],
            |images, idx| {
                decode(idx, range, images);
                let key = KeyMap::new(instance.alphabet, images.clone()).expect("digits in range");
                (stml_eval(&instance.challenge, &key, None).0 == y).then(|| KeyString::from_map(&key))
            },
        )
        .flatten()
        .collect();
    preimages.sort();
    Ok(InversionReport { preimages, keys_tried: total, steps })
}

/// Exact number of preimages of every reachable output, over all `digit_range^N` keys.
pub fn preimage_counts(instance: &OwfInstance, digit_range: u8, budget: f64) -> Result<HashMap<Vec<u8>, u64>> {
    let n = instance.n();
    let total = key_count(digit_range, n);
    if total > budget {
        return Err(Error::Budget { required: total, budget });
    }
    let range = digit_range as u64;
    let counts = (0..total as u64)
        .into_par_iter()
        .fold(
            || (vec![0u8; n], HashMap::new()),
            |(mut images, mut acc): (Vec<u8>, HashMap<Vec<u8>, u64>), idx| {
                decode(idx, range, &mut images);
                let key = KeyMap::new(instance.alphabet, images.clone()).expect("digits in range");
                *acc.entry(stml_eval(&instance.challenge, &key, None).0).or_default() += 1;
                (images, acc)
            },
        )
        .map(|(_, acc)| acc)
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(counts)
}

/// Histogram: preimage count -> number of outputs with that many preimages.
pub fn preimage_distribution(counts: &HashMap<Vec<u8>, u64>) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    for &c in counts.values() {
        *hist.entry(c).or_default() += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lengths() {
        assert_eq!(challenge_length(26, 1.0), 85);
        assert_eq!(challenge_length(4, 1.0), 6);
    }

    #[test]
    fn instance_covers() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = make_instance(26, 1.0, &mut rng).unwrap();
        assert_eq!(inst.challenge.len(), 85);
        assert!(inst.covers_alphabet());
        assert!(make_instance(1, 1.0, &mut rng).is_err());
        let round = OwfInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(round, inst);
    }

    #[test]
    fn eval_examples() {
        let inst = OwfInstance::from_text(Alphabet::LATIN, "GMAIL").unwrap();
        assert_eq!(eval(&inst, &KeyMap::alphabet_position()).unwrap(), vec![2, 3, 2, 4]);
        let zero = KeyMap::from_fn(Alphabet::LATIN, |_| 0);
        assert_eq!(eval(&inst, &zero).unwrap(), vec![0; 5]);
        assert!(eval(&inst, &KeyMap::affine_digits(1, 0)).is_err());
    }

    #[test]
    fn unused_symbol_is_irrelevant() {
        let inst = OwfInstance::from_text(Alphabet::LATIN, "GMAIL").unwrap();
        let a = KeyMap::alphabet_position();
        let mut images = a.images().to_vec();
        images[25] = (images[25] + 3) % 10;
        let b = KeyMap::new(Alphabet::LATIN, images).unwrap();
        assert_eq!(eval(&inst, &a).unwrap(), eval(&inst, &b).unwrap());
    }

    #[test]
    fn inversion_is_sound_and_complete() {
        let inst = OwfInstance::from_text(Alphabet::letters(4).unwrap(), "ABCDDA").unwrap();
        let x = KeyMap::new(inst.alphabet, vec![3, 1, 4, 1]).unwrap();
        let y = eval(&inst, &x).unwrap();
        let rep = brute_force_invert(&inst, &y, 10, DEFAULT_INVERT_BUDGET).unwrap();
        assert!(rep.preimages.contains(&KeyString::from_map(&x)));
        let counts = preimage_counts(&inst, 10, DEFAULT_INVERT_BUDGET).unwrap();
        assert_eq!(rep.preimages.len() as u64, counts[&y]);
        assert_eq!(counts.values().sum::<u64>(), 10_000);
        assert!(brute_force_invert(&inst, &[0; 7], 10, DEFAULT_INVERT_BUDGET).unwrap().preimages.is_empty());
        assert!(matches!(
            brute_force_invert(&make_instance(26, 1.0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap(), &y, 10, 1e7),
            Err(Error::Budget { .. })
        ));
    }
}
