//! STML over digits and the two STML-based "pseudo-random generator" candidates.
//!
//! A digit pass maps the running sum through the key before adding each seed
//! digit: `SUM <- key(SUM) + d (mod 10)`, emitting SUM when it is below 5.
//! Generator passes run over the seed and its skip-i subsequences, each pass
//! starting from the previous pass's final sum.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::keys::{Alphabet, KeyMap};
use crate::stats::{mean_variance, trial_rng};

/// Seed digits, each below 5 unless built with a looser constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Seed(Vec<u8>);

impl Seed {
    pub fn new(digits: Vec<u8>) -> Result<Seed> {
        Seed::checked(digits, 5)
    }

    /// Accepts digits `0..=5`.
    pub fn with_five(digits: Vec<u8>) -> Result<Seed> {
        Seed::checked(digits, 6)
    }

    /// Accepts any digit; used to replay worked examples whose seeds are not restricted.
    pub fn unrestricted(digits: Vec<u8>) -> Result<Seed> {
        Seed::checked(digits, 10)
    }

    fn checked(digits: Vec<u8>, bound: u8) -> Result<Seed> {
        if let Some(&d) = digits.iter().find(|&&d| d >= bound) {
            return Err(Error::Domain { symbol: d.to_string(), alphabet: format!("seed digits 0..{bound}") });
        }
        Ok(Seed(digits))
    }

    pub fn parse(text: &str) -> Result<Seed> {
        Seed::new(parse_digits(text)?)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Seed {
        Seed((0..n).map(|_| rng.random_range(0..5)).collect())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn parse_digits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Domain { symbol: c.to_string(), alphabet: "digits".into() })
        })
        .collect()
}

pub fn render_digits(digits: &[u8]) -> String {
    digits.iter().map(|&d| char::from(b'0' + d)).collect()
}

fn check_digit_key(key: &KeyMap) -> Result<()> {
    if key.alphabet() != Alphabet::Digits {
        return Err(Error::Config(format!("generator key must be over digits, got {}", key.alphabet())));
    }
    Ok(())
}

/// One STML pass over digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StmlPass {
    /// Skip length of the subsequence this pass read (0 for the whole seed).
    pub skip: usize,
    pub input: Vec<u8>,
    pub carry: u8,
    /// Running sum after each input digit.
    pub sums: Vec<u8>,
    pub output: Vec<u8>,
    pub final_sum: u8,
}

/// Digit STML from `carry`; an empty input emits nothing and keeps the carry.
pub fn stml_digits(input: &[u8], key: &KeyMap, carry: u8) -> StmlPass {
    let mut sum = carry;
    let mut sums = Vec::with_capacity(input.len());
    let mut output = Vec::with_capacity(input.len());
    for &d in input {
        sum = (key.at(sum as usize) + d) % 10;
        sums.push(sum);
        if sum < 5 {
            output.push(sum);
        }
    }
    StmlPass { skip: 0, input: input.to_vec(), carry, sums, output, final_sum: sum }
}

/// Largest valid skip length for a seed of length `n`.
pub fn max_skip(n: usize) -> usize {
    n / 2
}

/// Skip `i`, take `i`, skip `i`, ... from the left; `subseq(c, 0)` is `c`.
pub fn subseq(c: &[u8], i: usize) -> Result<Vec<u8>> {
    if i == 0 {
        return Ok(c.to_vec());
    }
    if i > max_skip(c.len()) {
        return Err(Error::Config(format!("skip length {i} outside 1..={} for length {}", max_skip(c.len()), c.len())));
    }
    Ok(c.iter().enumerate().filter(|(k, _)| (k / i) % 2 == 1).map(|(_, &d)| d).collect())
}

/// Concatenated generator output with its per-pass records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrgOutput {
    pub digits: Vec<u8>,
    /// Start index of each part of `digits` (the seed, when included, then each pass).
    pub pass_boundaries: Vec<usize>,
    pub passes: Vec<StmlPass>,
}

impl PrgOutput {
    pub fn rendered(&self) -> String {
        render_digits(&self.digits)
    }

    /// The slice of `digits` contributed by part `k`.
    pub fn part(&self, k: usize) -> &[u8] {
        let start = self.pass_boundaries[k];
        let end = self.pass_boundaries.get(k + 1).copied().unwrap_or(self.digits.len());
        &self.digits[start..end]
    }
}

fn run_passes(seed: &[u8], key: &KeyMap, skips: impl Iterator<Item = usize>, prefix_seed: bool) -> Result<PrgOutput> {
    let mut digits = Vec::new();
    let mut pass_boundaries = Vec::new();
    if prefix_seed {
        pass_boundaries.push(0);
        digits.extend_from_slice(seed);
    }
    let mut passes = Vec::new();
    // first pass: the raw last seed digit is the carry
    let mut carry = *seed.last().ok_or(Error::Empty("seed"))?;
    for skip in skips {
        let input = subseq(seed, skip)?;
        let mut pass = stml_digits(&input, key, carry);
        pass.skip = skip;
        carry = pass.final_sum;
        pass_boundaries.push(digits.len());
        digits.extend_from_slice(&pass.output);
        passes.push(pass);
    }
    Ok(PrgOutput { digits, pass_boundaries, passes })
}

/// First generator: passes over the seed and every skip-i subsequence, `i = 1..=n/2`.
pub fn prg1(seed: &Seed, key: &KeyMap) -> Result<PrgOutput> {
    check_digit_key(key)?;
    let n = seed.len();
    if n < 3 {
        return Err(Error::Config(format!("first generator needs a seed of length >= 3, got {n}")));
    }
    run_passes(seed.digits(), key, 0..=max_skip(n), false)
}

/// Second generator: the seed itself, then passes over the seed, its skip-1
/// and its skip-2 subsequences.
pub fn prg2(seed: &Seed, key: &KeyMap) -> Result<PrgOutput> {
    check_digit_key(key)?;
    let n = seed.len();
    if n < 5 {
        return Err(Error::Config(format!("second generator needs a seed of length >= 5, got {n}")));
    }
    run_passes(seed.digits(), key, 0..=2, true)
}

/// Allocation-light generator evaluation for search loops; `out` is cleared first.
pub fn generate_into(generator: Generator, seed: &[u8], key: &[u8; 10], out: &mut Vec<u8>) {
    out.clear();
    let n = seed.len();
    if n == 0 {
        return;
    }
    let last_skip = match generator {
        Generator::Prg1 => max_skip(n),
        Generator::Prg2 => {
            out.extend_from_slice(seed);
            2
        }
        Generator::SinglePass => 0,
    };
    let mut sum = seed[n - 1];
    for skip in 0..=last_skip {
        for (k, &d) in seed.iter().enumerate() {
            if skip == 0 || (k / skip) % 2 == 1 {
                sum = (key[sum as usize] + d) % 10;
                if sum < 5 {
                    out.push(sum);
                }
            }
        }
    }
}

pub fn key_array(key: &KeyMap) -> [u8; 10] {
    let mut k = [0u8; 10];
    k.copy_from_slice(&key.images()[..10]);
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Generator {
    Prg1,
    Prg2,
    /// One STML pass over the seed, no subsequences.
    SinglePass,
}

impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Generator> {
        match s {
            "prg1" => Ok(Generator::Prg1),
            "prg2" => Ok(Generator::Prg2),
            "stml" | "single" => Ok(Generator::SinglePass),
            other => Err(Error::Parse(format!("unknown generator `{other}`"))),
        }
    }
}

impl Generator {
    /// Advertised mean output length for seed length `n`.
    pub fn nominal_length(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Generator::Prg1 => n * (n + 1.0) / 4.0,
            Generator::Prg2 => 2.0 * n,
            Generator::SinglePass => n / 2.0,
        }
    }

    /// Number of running-sum updates (candidate emission slots) for seed length `n`.
    pub fn slot_count(self, n: usize) -> usize {
        let sub_len = |i: usize| (0..n).filter(|k| (k / i) % 2 == 1).count();
        match self {
            Generator::SinglePass => n,
            Generator::Prg1 => n + (1..=max_skip(n)).map(sub_len).sum::<usize>(),
            Generator::Prg2 => n + sub_len(1) + sub_len(2),
        }
    }

    pub fn generate(self, seed: &Seed, key: &KeyMap) -> Result<Vec<u8>> {
        check_digit_key(key)?;
        let mut out = Vec::new();
        generate_into(self, seed.digits(), &key_array(key), &mut out);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthStats {
    pub generator: Generator,
    pub n: usize,
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub nominal: f64,
    /// `(mean - nominal) / nominal`.
    pub relative_error: f64,
}

pub const MIN_LENGTH_TRIALS: u64 = 1000;

/// Empirical output length over uniform seeds and uniform keys.
pub fn expected_length_report(generator: Generator, n: usize, trials: u64, rng_seed: u64) -> Result<LengthStats> {
    if trials < MIN_LENGTH_TRIALS {
        return Err(Error::SampleSize { required: MIN_LENGTH_TRIALS as usize, found: trials as usize });
    }
    if n == 0 {
        return Err(Error::Empty("seed"));
    }
    let lengths: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |out, t| {
            let mut rng = trial_rng(rng_seed, t);
            let key = key_array(&KeyMap::random(Alphabet::Digits, &mut rng));
            let seed = Seed::random(n, &mut rng);
            generate_into(generator, seed.digits(), &key, out);
            out.len() as f64
        })
        .collect();
    let (mean, variance) = mean_variance(&lengths);
    let nominal = generator.nominal_length(n);
    Ok(LengthStats { generator, n, trials, mean, variance, nominal, relative_error: (mean - nominal) / nominal })
}
