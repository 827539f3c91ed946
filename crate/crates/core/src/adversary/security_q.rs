//! Monte Carlo estimate of how many observed challenge/response pairs an
//! adversary needs before guessing a fresh response with probability >= 1/10.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::keys::{Alphabet, KeyMap};
use crate::schemas::{self, FixedSuffix, SchemaId};
use crate::stats::{trial_rng, wilson_interval, Z99};

/// Success probability an adversary must reach.
pub const GUESS_THRESHOLD: f64 = 0.1;

const PROBABILITY_TOLERANCE: f64 = 1e-6;

/// Weighted word list.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    words: Vec<String>,
    probabilities: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl Lexicon {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Lexicon> {
        if entries.is_empty() {
            return Err(Error::Empty("lexicon"));
        }
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if entries.iter().any(|e| !e.1.is_finite() || e.1 < 0.0) || (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::Config(format!("lexicon probabilities must be nonnegative and sum to 1, got {total}")));
        }
        let (words, probabilities): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        let index = WeightedIndex::new(&probabilities).map_err(|e| Error::Config(e.to_string()))?;
        Ok(Lexicon { words, probabilities, index })
    }

    pub fn uniform(words: &[&str]) -> Result<Lexicon> {
        let p = 1.0 / words.len().max(1) as f64;
        Lexicon::new(words.iter().map(|w| (w.to_string(), p)).collect())
    }

    /// One `word probability` pair per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Lexicon> {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let mut parts = l.split_whitespace();
                let (Some(w), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(Error::Parse(format!("lexicon line `{l}`")));
                };
                let p: f64 = p.parse().map_err(|_| Error::Parse(format!("probability in `{l}`")))?;
                Ok((w.to_string(), p))
            })
            .collect::<Result<Vec<_>>>()?;
        Lexicon::new(entries)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.words.iter().map(String::as_str).zip(self.probabilities.iter().copied())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &str {
        &self.words[self.index.sample(rng)]
    }
}

/// Where fresh challenges come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ChallengeSource {
    Lexicon(Lexicon),
    /// Uniform strings of capital letters of the given length.
    UniformLetters(usize),
}

impl ChallengeSource {
    pub fn id(&self) -> String {
        match self {
            ChallengeSource::Lexicon(l) => format!("lexicon({} words)", l.len()),
            ChallengeSource::UniformLetters(n) => format!("uniform-letters({n})"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> String {
        match self {
            ChallengeSource::Lexicon(l) => l.sample(rng).to_string(),
            ChallengeSource::UniformLetters(n) => (0..*n).map(|_| char::from(b'A' + rng.random_range(0..26u8))).collect(),
        }
    }
}

/// The user's side: how a challenge becomes a password.
#[derive(Debug, Clone, PartialEq)]
pub enum Responder {
    Schema { id: SchemaId, key: KeyMap, suffix: Option<FixedSuffix> },
    /// A fixed list of passwords, picked by a hash of the challenge.
    Reused(Vec<String>),
}

/// FNV-1a; stable across platforms and toolchains.
fn stable_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

impl Responder {
    pub fn id(&self) -> String {
        match self {
            Responder::Schema { id, .. } => id.to_string(),
            Responder::Reused(p) => format!("reused({})", p.len()),
        }
    }

    pub fn respond(&self, challenge: &str) -> Result<String> {
        match self {
            Responder::Schema { id, key, suffix } => match id {
                SchemaId::LetterSubstitution => Ok(schemas::letter_substitution(challenge, key)?.output),
                SchemaId::SingleDigit => {
                    let s = suffix.clone().ok_or_else(|| Error::Config("single-digit schema needs a fixed string".into()))?;
                    Ok(schemas::single_digit_single_string(challenge, key, &s)?.output)
                }
                SchemaId::Stml => Ok(schemas::stml(challenge, key, None)?.result.output),
            },
            Responder::Reused(passwords) => {
                if passwords.is_empty() {
                    return Err(Error::Empty("password list"));
                }
                Ok(passwords[(stable_hash(challenge) % passwords.len() as u64) as usize].clone())
            }
        }
    }
}

/// What the map-constraint adversary learned from letter-substitution observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapConstraintGuesser {
    learned: [Option<u8>; 26],
}

impl MapConstraintGuesser {
    pub fn learn<'a>(observations: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<MapConstraintGuesser> {
        let mut learned = [None; 26];
        for (challenge, password) in observations {
            let letters = Alphabet::LATIN.parse(challenge, false)?;
            let digits: Vec<u8> = password.chars().filter_map(|c| c.to_digit(10).map(|d| d as u8)).collect();
            if digits.len() != letters.len() || password.chars().count() != letters.len() {
                return Err(Error::Inconsistent(format!("`{password}` cannot be a substitution of `{challenge}`")));
            }
            for (&l, &d) in letters.iter().zip(&digits) {
                match learned[l] {
                    Some(prev) if prev != d => {
                        return Err(Error::Inconsistent(format!(
                            "{} maps to both {prev} and {d}",
                            Alphabet::LATIN.render_symbol(l)
                        )))
                    }
                    _ => learned[l] = Some(d),
                }
            }
        }
        Ok(MapConstraintGuesser { learned })
    }

    pub fn partial_map(&self) -> &[Option<u8>; 26] {
        &self.learned
    }

    /// The response when every letter is known, otherwise `None`.
    pub fn predict(&self, challenge: &str) -> Option<String> {
        let letters = Alphabet::LATIN.parse(challenge, false).ok()?;
        letters.iter().map(|&l| self.learned[l].map(|d| char::from(b'0' + d))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guesser {
    /// Repeats the response seen for the same challenge, else the most frequent response.
    Majority,
    /// Learns the letter map and abstains when a letter is unknown.
    MapConstraint,
}

impl std::str::FromStr for Guesser {
    type Err = Error;
    fn from_str(s: &str) -> Result<Guesser> {
        match s {
            "majority" => Ok(Guesser::Majority),
            "map" | "map-constraint" => Ok(Guesser::MapConstraint),
            other => Err(Error::Parse(format!("unknown guesser `{other}`"))),
        }
    }
}

impl Guesser {
    pub fn guess(self, observations: &[(String, String)], fresh: &str) -> Option<String> {
        match self {
            Guesser::Majority => {
                if let Some((_, p)) = observations.iter().find(|(c, _)| c == fresh) {
                    return Some(p.clone());
                }
                let mut counts: HashMap<&str, (usize, usize)> = HashMap::new();
                for (i, (_, p)) in observations.iter().enumerate() {
                    counts.entry(p).or_insert((0, i)).0 += 1;
                }
                // most frequent, earliest seen on ties
                counts.into_iter().max_by_key(|&(_, (n, first))| (n, std::cmp::Reverse(first))).map(|(p, _)| p.to_string())
            }
            Guesser::MapConstraint => MapConstraintGuesser::learn(observations.iter().map(|(c, p)| (c.as_str(), p.as_str())))
                .ok()?
                .predict(fresh),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QPoint {
    pub observations: usize,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityQReport {
    pub schema: String,
    pub distribution: String,
    pub guesser: Guesser,
    pub points: Vec<QPoint>,
    /// Fewest observations at which the empirical success rate reaches the threshold.
    pub q: Option<usize>,
    /// Fewest observations at which the 99% Wilson lower bound reaches the threshold.
    pub q_confident: Option<usize>,
}

/// Success rates for `m = 0..=max_observations`, each over `trials` independent draws.
pub fn estimate_security_q(
    responder: &Responder,
    source: &ChallengeSource,
    guesser: Guesser,
    max_observations: usize,
    trials: u64,
    seed: u64,
) -> Result<SecurityQReport> {
    if trials == 0 {
        return Err(Error::SampleSize { required: 1, found: 0 });
    }
    let mut points = Vec::with_capacity(max_observations + 1);
    for m in 0..=max_observations {
        let successes = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<u64> {
                let mut rng = trial_rng(seed, m as u64 * trials + t);
                let observed = (0..m)
                    .map(|_| {
                        let c = source.sample(&mut rng);
                        responder.respond(&c).map(|p| (c, p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let fresh = source.sample(&mut rng);
                let truth = responder.respond(&fresh)?;
                Ok(u64::from(guesser.guess(&observed, &fresh).as_deref() == Some(truth.as_str())))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        let (wilson_low, wilson_high) = wilson_interval(successes, trials, Z99);
        points.push(QPoint { observations: m, trials, successes, rate: successes as f64 / trials as f64, wilson_low, wilson_high });
    }
    let q = points.iter().find(|p| p.rate >= GUESS_THRESHOLD).map(|p| p.observations);
    let q_confident = points.iter().find(|p| p.wilson_low >= GUESS_THRESHOLD).map(|p| p.observations);
    Ok(SecurityQReport { schema: responder.id(), distribution: source.id(), guesser, points, q, q_confident })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_parsing() {
        let l = Lexicon::parse("GMAIL 0.5\n# c\nAPPLE 0.5\n").unwrap();
        assert_eq!(l.len(), 2);
        assert!(Lexicon::parse("GMAIL 0.4").is_err());
        assert!(Lexicon::parse("").is_err());
        assert!(Lexicon::parse("GMAIL x").is_err());
    }

    #[test]
    fn map_guesser_learns_and_predicts() {
        let g = MapConstraintGuesser::learn([("GMAIL", "73192")]).unwrap();
        assert_eq!(g.partial_map()[6], Some(7));
        assert_eq!(g.predict("MAIL").as_deref(), Some("3192"));
        assert_eq!(g.predict("MAILS"), None);
        assert!(matches!(MapConstraintGuesser::learn([("GMAIL", "73192"), ("GAS", "111")]), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn singleton_lexicon_has_q_one() {
        let responder = Responder::Schema { id: SchemaId::Stml, key: KeyMap::alphabet_position(), suffix: None };
        let source = ChallengeSource::Lexicon(Lexicon::uniform(&["GMAIL"]).unwrap());
        let rep = estimate_security_q(&responder, &source, Guesser::Majority, 3, 200, 1).unwrap();
        assert_eq!(rep.points[0].successes, 0);
        assert_eq!(rep.q, Some(1));
        assert_eq!(rep.q_confident, Some(1));
    }

    #[test]
    fn majority_prefers_exact_match() {
        let obs = vec![("A".to_string(), "x".to_string()), ("B".to_string(), "y".to_string()), ("C".to_string(), "y".to_string())];
        assert_eq!(Guesser::Majority.guess(&obs, "A").as_deref(), Some("x"));
        assert_eq!(Guesser::Majority.guess(&obs, "D").as_deref(), Some("y"));
        assert_eq!(Guesser::Majority.guess(&[], "D"), None);
    }
}
