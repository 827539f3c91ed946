//! Textual modifier pipelines, e.g. `start:two-past-first-vowel | stml | append:aA1@`.
//!
//! Stages before the schema rewrite the challenge; stages after it rewrite
//! the password.

use std::str::FromStr;

use super::{
    append_fixed, handle_repeats, parse_moves, parse_shift_digits, rotate_from, shift_add, start_index,
    typewriter_shift, KeyboardLayout, Move, Placement, RepeatHandling, StartRule,
};
use crate::error::{Error, Result};
use crate::keys::KeyMap;
use crate::schemas::{self, FixedSuffix, RunOptions, SchemaResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChallengeStage {
    Start(StartRule),
    Repeats(RepeatHandling),
    ShiftAdd(Vec<u8>),
    /// Appends a fixed string to the challenge before the schema runs.
    Extend(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaStage {
    LetterSubstitution,
    SingleDigit(FixedSuffix),
    Stml,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PasswordStage {
    Typewriter { moves: Vec<Move>, no_double: bool },
    Append { fixed: String, placement: Placement },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pipeline {
    pub challenge_stages: Vec<ChallengeStage>,
    pub schema: Option<SchemaStage>,
    pub password_stages: Vec<PasswordStage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    /// Challenge as the schema saw it.
    pub challenge: String,
    pub password: String,
    pub schema: Option<SchemaResult>,
}

fn parse_placement(s: &str) -> Result<Placement> {
    match s {
        "prefix" => Ok(Placement::Prefix),
        "suffix" => Ok(Placement::Suffix),
        other => other
            .strip_prefix("every")
            .and_then(|k| k.parse().ok())
            .map(Placement::Interleave)
            .ok_or_else(|| Error::Parse(format!("unknown placement `{other}`"))),
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(text: &str) -> Result<Pipeline> {
        let mut p = Pipeline::default();
        for stage in text.split('|').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, arg) = stage.split_once(':').unwrap_or((stage, ""));
            let after_schema = p.schema.is_some();
            let challenge_stage = |p: &mut Pipeline, s: ChallengeStage| {
                if after_schema {
                    Err(Error::Parse(format!("challenge stage `{stage}` after the schema")))
                } else {
                    p.challenge_stages.push(s);
                    Ok(())
                }
            };
            let set_schema = |p: &mut Pipeline, s: SchemaStage| {
                if after_schema {
                    Err(Error::Parse("more than one schema stage".into()))
                } else {
                    p.schema = Some(s);
                    Ok(())
                }
            };
            match name {
                "start" => challenge_stage(&mut p, ChallengeStage::Start(arg.parse()?))?,
                "repeats" => {
                    let rule = match arg {
                        "delete" => RepeatHandling::Delete,
                        "increment" => RepeatHandling::IncrementBySeen,
                        other => return Err(Error::Parse(format!("unknown repeat rule `{other}`"))),
                    };
                    challenge_stage(&mut p, ChallengeStage::Repeats(rule))?
                }
                "shiftadd" => challenge_stage(&mut p, ChallengeStage::ShiftAdd(parse_shift_digits(arg)?))?,
                "extend" => challenge_stage(&mut p, ChallengeStage::Extend(arg.to_string()))?,
                "letter-sub" => set_schema(&mut p, SchemaStage::LetterSubstitution)?,
                "single-digit" => set_schema(&mut p, SchemaStage::SingleDigit(FixedSuffix::new(arg)?))?,
                "stml" => set_schema(&mut p, SchemaStage::Stml)?,
                "typewriter" => {
                    let (moves, flag) = arg.split_once(':').unwrap_or((arg, ""));
                    p.password_stages.push(PasswordStage::Typewriter {
                        moves: parse_moves(moves)?,
                        no_double: flag == "nodouble",
                    });
                }
                "append" => {
                    let (fixed, placement) = match arg.rsplit_once(':') {
                        Some((f, pl)) => (f, parse_placement(pl)?),
                        None => (arg, Placement::Suffix),
                    };
                    if fixed.is_empty() {
                        return Err(Error::Empty("fixed string"));
                    }
                    p.password_stages.push(PasswordStage::Append { fixed: fixed.to_string(), placement });
                }
                other => return Err(Error::Parse(format!("unknown pipeline stage `{other}`"))),
            }
        }
        Ok(p)
    }
}

impl Pipeline {
    /// Rewrites the challenge through the pre-schema stages.
    pub fn transform_challenge(&self, challenge: &str) -> Result<String> {
        let mut c = challenge.to_string();
        for stage in &self.challenge_stages {
            c = match stage {
                ChallengeStage::Start(rule) => rotate_from(&c, start_index(&c, rule)),
                ChallengeStage::Repeats(rule) => handle_repeats(&c, *rule),
                ChallengeStage::ShiftAdd(shifts) => shift_add(&c, shifts)?,
                ChallengeStage::Extend(s) => format!("{c}{s}"),
            };
        }
        Ok(c)
    }

    pub fn run(&self, challenge: &str, key: &KeyMap, opts: &RunOptions) -> Result<PipelineOutput> {
        let challenge = self.transform_challenge(challenge)?;
        let schema = match &self.schema {
            None => None,
            Some(SchemaStage::LetterSubstitution) => Some(schemas::letter_substitution_with(&challenge, key, opts)?),
            Some(SchemaStage::SingleDigit(s)) => Some(schemas::single_digit_single_string_with(&challenge, key, s, opts)?),
            Some(SchemaStage::Stml) => Some(schemas::stml_with(&challenge, key, None, opts)?.result),
        };
        let mut password = schema.as_ref().map_or_else(|| challenge.clone(), |r| r.output.clone());
        let mut layout = None;
        for stage in &self.password_stages {
            password = match stage {
                PasswordStage::Typewriter { moves, no_double } => {
                    let kb = layout.get_or_insert_with(KeyboardLayout::qwerty);
                    typewriter_shift(&password, moves, kb, *no_double)?
                }
                PasswordStage::Append { fixed, placement } => append_fixed(&password, fixed, *placement)?,
            };
        }
        Ok(PipelineOutput { challenge, password, schema })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_then_stml() {
        let p: Pipeline = "start:two-past-first-vowel | stml".parse().unwrap();
        let out = p.run("AMEX", &KeyMap::alphabet_position(), &RunOptions::default()).unwrap();
        assert_eq!(out.challenge, "EXAM");
        assert!(out.schema.is_some());
    }

    #[test]
    fn full_pipeline() {
        let p: Pipeline = "repeats:delete | letter-sub | append:aA1@:suffix".parse().unwrap();
        let out = p.run("APPLE", &KeyMap::alphabet_position(), &RunOptions::default()).unwrap();
        assert_eq!(out.challenge, "APLE");
        assert_eq!(out.password, "1625aA1@");
    }

    #[test]
    fn typewriter_stage_without_schema() {
        let p: Pipeline = "typewriter:r,ur:nodouble".parse().unwrap();
        let out = p.run("password", &KeyMap::alphabet_position(), &RunOptions::default()).unwrap();
        assert_eq!(out.password, "=erc4-6t");
    }

    #[test]
    fn malformed_pipelines() {
        assert!("stml | stml".parse::<Pipeline>().is_err());
        assert!("stml | start:last".parse::<Pipeline>().is_err());
        assert!("bogus".parse::<Pipeline>().is_err());
        assert!("append:".parse::<Pipeline>().is_err());
        assert!("append:x:every0".parse::<Pipeline>().is_ok());
    }
}
