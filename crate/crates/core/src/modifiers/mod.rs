//! Building blocks for personal schemas: keyboard shifts, letter shifts,
//! start rules, repeat handling, challenge-dependent carries and fixed strings.

mod layout;
mod pipeline;

pub use layout::{parse_moves, KeyPosition, KeyboardLayout, Move};
pub use pipeline::{ChallengeStage, PasswordStage, Pipeline, PipelineOutput, SchemaStage};

use crate::error::{Error, Result};

/// Replaces every character by the key reached with `moves`.
///
/// With `no_double`, a character that would repeat the previous output
/// character is instead displaced by the vertically flipped moves.
pub fn typewriter_shift(text: &str, moves: &[Move], layout: &KeyboardLayout, no_double: bool) -> Result<String> {
    let alternative: Vec<Move> = moves.iter().map(|m| m.flipped()).collect();
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<char> = None;
    for c in text.chars() {
        let mut shifted = layout.displace(c, moves)?;
        if no_double && prev == Some(shifted) {
            shifted = layout.displace(c, &alternative)?;
        }
        out.push(shifted);
        prev = Some(shifted);
    }
    Ok(out)
}

/// Parses a shift string such as `314 154-2153`, ignoring spaces and hyphens.
pub fn parse_shift_digits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !matches!(c, ' ' | '-' | '(' | ')'))
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("shift digit `{c}`"))))
        .collect()
}

fn letter_index(c: char) -> Result<u8> {
    match c {
        'A'..='Z' => Ok(c as u8 - b'A'),
        _ => Err(Error::Domain { symbol: c.to_string(), alphabet: "letters".into() }),
    }
}

fn shift_letter(c: u8, by: u32) -> char {
    char::from(b'A' + ((c as u32 + by) % 26) as u8)
}

/// Shift-addition: the i-th letter advances cyclically by the i-th shift.
///
/// Letters past the end of `shifts` are left as they are. When `shifts` is
/// longer than the text, the text is repeated to the length of `shifts`.
pub fn shift_add(text: &str, shifts: &[u8]) -> Result<String> {
    if shifts.is_empty() {
        return Err(Error::Empty("shift string"));
    }
    let letters = text.chars().map(letter_index).collect::<Result<Vec<_>>>()?;
    if letters.is_empty() {
        return Err(Error::Empty("text"));
    }
    let len = letters.len().max(shifts.len());
    Ok((0..len)
        .map(|i| {
            let c = letters[i % letters.len()];
            shift_letter(c, shifts.get(i).copied().unwrap_or(0) as u32)
        })
        .collect())
}

pub const VOWELS: &str = "AEIOU";
/// Capitals drawn with a vertical stroke.
pub const VERTICAL_LINE_LETTERS: &str = "BDEFHIJKLMNPRTUY";
/// Letters whose names end in an "ee" sound.
pub const EEE_SOUND_LETTERS: &str = "BCDEGPTVZ";
/// Letters voiced with the tongue on the palate.
pub const TONGUE_TOUCH_LETTERS: &str = "DLNTW";

/// Where a schema begins reading the challenge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartRule {
    First,
    LastLetter,
    SecondVowel,
    /// `offset` letters past the first vowel.
    PastFirstVowel(usize),
    /// `offset` letters past the first letter in `set`.
    PastFirstInSet { set: String, offset: usize },
}

impl StartRule {
    pub fn two_past_first_vowel() -> StartRule {
        StartRule::PastFirstVowel(2)
    }

    pub fn one_past_first_in(set: &str) -> StartRule {
        StartRule::PastFirstInSet { set: set.to_string(), offset: 1 }
    }
}

impl std::str::FromStr for StartRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<StartRule> {
        Ok(match s {
            "first" => StartRule::First,
            "last" | "last-letter" => StartRule::LastLetter,
            "second-vowel" => StartRule::SecondVowel,
            "two-past-first-vowel" => StartRule::two_past_first_vowel(),
            "past-vertical-line" => StartRule::one_past_first_in(VERTICAL_LINE_LETTERS),
            "past-eee" => StartRule::one_past_first_in(EEE_SOUND_LETTERS),
            "past-tongue" => StartRule::one_past_first_in(TONGUE_TOUCH_LETTERS),
            other => return Err(Error::Parse(format!("unknown start rule `{other}`"))),
        })
    }
}

/// Index at which `rule` starts on `challenge`.
///
/// Offsets past the trigger wrap around the challenge; a rule whose trigger
/// is absent falls back to the last letter. An empty challenge yields 0.
pub fn start_index(challenge: &str, rule: &StartRule) -> usize {
    let chars: Vec<char> = challenge.chars().map(|c| c.to_ascii_uppercase()).collect();
    let n = chars.len();
    if n == 0 {
        return 0;
    }
    let last = n - 1;
    let first_in = |set: &str| chars.iter().position(|c| set.contains(*c));
    match rule {
        StartRule::First => 0,
        StartRule::LastLetter => last,
        StartRule::SecondVowel => chars
            .iter()
            .enumerate()
            .filter(|(_, c)| VOWELS.contains(**c))
            .nth(1)
            .map_or(last, |(i, _)| i),
        StartRule::PastFirstVowel(k) => first_in(VOWELS).map_or(last, |i| (i + k) % n),
        StartRule::PastFirstInSet { set, offset } => first_in(set).map_or(last, |i| (i + offset) % n),
    }
}

/// The challenge read cyclically from `start`.
pub fn rotate_from(challenge: &str, start: usize) -> String {
    let chars: Vec<char> = challenge.chars().collect();
    if chars.is_empty() {
        return String::new();
    }
    let start = start % chars.len();
    chars[start..].iter().chain(&chars[..start]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepeatHandling {
    /// Remove a letter equal to the one before it.
    Delete,
    /// Advance each letter by how many times it has already been seen.
    IncrementBySeen,
}

pub fn handle_repeats(challenge: &str, rule: RepeatHandling) -> String {
    match rule {
        RepeatHandling::Delete => {
            let mut out = String::with_capacity(challenge.len());
            let mut prev = None;
            for c in challenge.chars() {
                if prev != Some(c) {
                    out.push(c);
                }
                prev = Some(c);
            }
            out
        }
        RepeatHandling::IncrementBySeen => {
            let mut seen = [0u32; 26];
            challenge
                .chars()
                .map(|c| match letter_index(c) {
                    Ok(i) => {
                        let shifted = shift_letter(i, seen[i as usize]);
                        seen[i as usize] += 1;
                        shifted
                    }
                    Err(_) => c,
                })
                .collect()
        }
    }
}

/// How a starting carry is derived from a digit challenge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CarryMode {
    DigitSum,
    DotProduct(Vec<u8>),
}

pub fn challenge_carry(challenge: &str, mode: &CarryMode) -> Result<u8> {
    let digits = challenge
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u64)
                .ok_or_else(|| Error::Domain { symbol: c.to_string(), alphabet: "digits".into() })
        })
        .collect::<Result<Vec<_>>>()?;
    let total: u64 = match mode {
        CarryMode::DigitSum => digits.iter().sum(),
        CarryMode::DotProduct(v) => {
            if v.len() != digits.len() {
                return Err(Error::Dimension { expected: digits.len(), found: v.len() });
            }
            digits.iter().zip(v).map(|(a, &b)| a * b as u64).sum()
        }
    };
    Ok((total % 10) as u8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Prefix,
    Suffix,
    /// One fixed-string character after every `period` password characters;
    /// leftovers go at the end.
    Interleave(usize),
}

pub fn append_fixed(password: &str, fixed: &str, placement: Placement) -> Result<String> {
    if fixed.is_empty() {
        return Err(Error::Empty("fixed string"));
    }
    Ok(match placement {
        Placement::Prefix => format!("{fixed}{password}"),
        Placement::Suffix => format!("{password}{fixed}"),
        Placement::Interleave(0) => {
            return Err(Error::Config("interleave period must be at least 1".into()));
        }
        Placement::Interleave(period) => {
            let mut extra = fixed.chars();
            let mut out = String::with_capacity(password.len() + fixed.len());
            for (i, c) in password.chars().enumerate() {
                out.push(c);
                if (i + 1) % period == 0 {
                    if let Some(e) = extra.next() {
                        out.push(e);
                    }
                }
            }
            out.extend(extra);
            out
        }
    })
}

/// Longest common suffix of two observed passwords.
pub fn common_suffix(a: &str, b: &str) -> String {
    let shared: Vec<char> = a.chars().rev().zip(b.chars().rev()).take_while(|(x, y)| x == y).map(|(x, _)| x).collect();
    shared.into_iter().rev().collect()
}
