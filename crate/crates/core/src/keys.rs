//! Alphabets and memorized symbol-to-digit maps.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::CostLedger;

/// Ordered source alphabet of a [`KeyMap`].
///
/// Symbols are addressed by their index in the fixed alphabet order, so a map
/// over the alphabet is a digit string of the alphabet's size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// The first `n` capital letters, `1 <= n <= 26`.
    Letters(u8),
    /// The ten digits `0..=9`.
    Digits,
    /// The hundred two-digit numbers `00..=99`.
    Pairs,
}

impl Alphabet {
    pub const LATIN: Alphabet = Alphabet::Letters(26);

    pub fn letters(n: usize) -> Result<Alphabet> {
        if (1..=26).contains(&n) {
            Ok(Alphabet::Letters(n as u8))
        } else {
            Err(Error::Config(format!("letter alphabet size {n} outside 1..=26")))
        }
    }

    /// An alphabet of exactly `n` symbols: letters up to 26, then pairs.
    pub fn of_size(n: usize) -> Result<Alphabet> {
        match n {
            1..=26 => Alphabet::letters(n),
            100 => Ok(Alphabet::Pairs),
            _ => Err(Error::Config(format!("no alphabet of size {n}"))),
        }
    }

    pub fn is_letters(self) -> bool {
        matches!(self, Alphabet::Letters(_))
    }

    pub fn size(self) -> usize {
        match self {
            Alphabet::Letters(n) => n as usize,
            Alphabet::Digits => 10,
            Alphabet::Pairs => 100,
        }
    }

    /// Identifier used in key files.
    pub fn id(self) -> String {
        match self {
            Alphabet::Letters(26) => "letters".to_string(),
            Alphabet::Letters(n) => format!("letters{n}"),
            Alphabet::Digits => "digits".to_string(),
            Alphabet::Pairs => "pairs".to_string(),
        }
    }

    pub fn from_id(id: &str) -> Result<Alphabet> {
        match id.trim() {
            "letters" => Ok(Alphabet::LATIN),
            "digits" => Ok(Alphabet::Digits),
            "pairs" => Ok(Alphabet::Pairs),
            other => other
                .strip_prefix("letters")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown alphabet `{other}`")))
                .and_then(Alphabet::letters),
        }
    }

    fn domain_error(self, symbol: impl Into<String>) -> Error {
        Error::Domain { symbol: symbol.into(), alphabet: self.id() }
    }

    /// Parses text into symbol indices, rejecting anything outside the alphabet.
    ///
    /// With `normalize`, lowercase letters are accepted and uppercased first.
    pub fn parse(self, text: &str, normalize: bool) -> Result<Vec<usize>> {
        match self {
            Alphabet::Letters(n) => text
                .chars()
                .map(|c| {
                    let c = if normalize { c.to_ascii_uppercase() } else { c };
                    match c {
                        'A'..='Z' if ((c as u8 - b'A') as usize) < n as usize => {
                            Ok((c as u8 - b'A') as usize)
                        }
                        _ => Err(self.domain_error(c.to_string())),
                    }
                })
                .collect(),
            Alphabet::Digits => text
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| self.domain_error(c.to_string())))
                .collect(),
            Alphabet::Pairs => {
                let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
                if !chars.len().is_multiple_of(2) {
                    return Err(self.domain_error(text));
                }
                chars
                    .chunks(2)
                    .map(|p| match (p[0].to_digit(10), p[1].to_digit(10)) {
                        (Some(a), Some(b)) => Ok((a * 10 + b) as usize),
                        _ => Err(self.domain_error(p.iter().collect::<String>())),
                    })
                    .collect()
            }
        }
    }

    pub fn render_symbol(self, index: usize) -> String {
        match self {
            Alphabet::Letters(_) => ((b'A' + index as u8) as char).to_string(),
            Alphabet::Digits => index.to_string(),
            Alphabet::Pairs => format!("{index:02}"),
        }
    }

    pub fn render(self, symbols: &[usize]) -> String {
        symbols.iter().map(|&s| self.render_symbol(s)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A memorized hash function from an alphabet to the digits `0..=9`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeyMap {
    alphabet: Alphabet,
    images: Vec<u8>,
}

impl KeyMap {
    pub fn new(alphabet: Alphabet, images: Vec<u8>) -> Result<KeyMap> {
        if images.len() != alphabet.size() {
            return Err(Error::KeyLength { expected: alphabet.size(), found: images.len() });
        }
        if let Some(&d) = images.iter().find(|&&d| d > 9) {
            return Err(Error::NotADigit(d));
        }
        Ok(KeyMap { alphabet, images })
    }

    pub fn from_fn(alphabet: Alphabet, f: impl Fn(usize) -> u8) -> KeyMap {
        let images = (0..alphabet.size()).map(|i| f(i) % 10).collect();
        KeyMap { alphabet, images }
    }

    /// `A -> 1, B -> 2, ..., J -> 0, ..., Z -> 6`.
    pub fn alphabet_position() -> KeyMap {
        KeyMap::from_fn(Alphabet::LATIN, |i| ((i + 1) % 10) as u8)
    }

    /// Digit map `i -> (a*i + b) mod 10`.
    pub fn affine_digits(a: u8, b: u8) -> KeyMap {
        KeyMap::from_fn(Alphabet::Digits, |i| ((a as usize * i + b as usize) % 10) as u8)
    }

    pub fn random<R: Rng + ?Sized>(alphabet: Alphabet, rng: &mut R) -> KeyMap {
        KeyMap::random_in_range(alphabet, 10, rng)
    }

    /// Uniform map whose images are drawn from `0..range`.
    pub fn random_in_range<R: Rng + ?Sized>(alphabet: Alphabet, range: u8, rng: &mut R) -> KeyMap {
        let images = (0..alphabet.size()).map(|_| rng.random_range(0..range.clamp(1, 10))).collect();
        KeyMap { alphabet, images }
    }

    /// Decodes a digit string written in the alphabet's fixed order.
    pub fn from_key_string(alphabet: Alphabet, digits: &str) -> Result<KeyMap> {
        let images = digits
            .trim()
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("key digit `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        KeyMap::new(alphabet, images)
    }

    pub fn to_key_string(&self) -> String {
        self.images.iter().map(|d| char::from(b'0' + d)).collect()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn get(&self, symbol: usize) -> Result<u8> {
        self.images
            .get(symbol)
            .copied()
            .ok_or_else(|| self.alphabet.domain_error(symbol.to_string()))
    }

    /// Unchecked lookup for hot loops; `symbol` must be in range.
    #[inline]
    pub fn at(&self, symbol: usize) -> u8 {
        self.images[symbol]
    }

    /// Key file: alphabet id on the first line, digit string on the second.
    pub fn to_file_string(&self) -> String {
        format!("{}\n{}\n", self.alphabet.id(), self.to_key_string())
    }

    pub fn from_file_string(text: &str) -> Result<KeyMap> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let id = lines.next().ok_or_else(|| Error::Parse("key file missing alphabet line".into()))?;
        let digits = lines.next().ok_or_else(|| Error::Parse("key file missing digit line".into()))?;
        KeyMap::from_key_string(Alphabet::from_id(id)?, digits)
    }
}

/// A memorized map plus the preprocessing it cost.
#[derive(Debug, Clone)]
pub struct GeneratedKey {
    pub key: KeyMap,
    pub prep: CostLedger,
}

/// Draws a uniform key with one ten-sided die toss per alphabet symbol.
///
/// Storing the map writes two chunks per (symbol, digit) pair.
pub fn gen_key<R: Rng + ?Sized>(alphabet: Alphabet, rng: &mut R) -> GeneratedKey {
    let key = KeyMap::random(alphabet, rng);
    let mut prep = CostLedger::default();
    prep.record_die_tosses(alphabet.size() as u64, 10);
    prep.record_chunks_written(2 * alphabet.size() as u64);
    GeneratedKey { key, prep }
}
