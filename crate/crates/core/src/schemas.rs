//! Password schemas executed on the costed machine.
//!
//! Each schema loads its key into long-term memory, reads the challenge from
//! the tape, and reports the output with its PROC ledger and step trace.
//! Under [`Accounting::Formula`] a schema charges exactly the steps its
//! published PROC expression lists; the remaining steps are traced at cost 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::keys::KeyMap;
use crate::machine::{comm_cost, word_count, Accounting, Charge, Chunk, CostLedger, Machine, TraceStep};

const KEY: &str = "f";
const SUFFIX: &str = "S";

/// Machine configuration for a schema run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub accounting: Accounting,
    pub stm_capacity: usize,
    pub trace: bool,
    /// Uppercase letters before validating the challenge.
    pub normalize: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            accounting: Accounting::Formula,
            stm_capacity: crate::machine::DEFAULT_STM_CAPACITY,
            trace: true,
            normalize: false,
        }
    }
}

impl RunOptions {
    fn machine(&self, key: &KeyMap) -> Machine {
        let mut m = Machine::new(self.stm_capacity).with_accounting(self.accounting);
        if !self.trace {
            m = m.without_trace();
        }
        m.install_map(KEY, key.clone());
        m
    }
}

/// A fixed string appended to every password; never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSuffix(String);

impl FixedSuffix {
    pub fn new(symbols: &str) -> Result<FixedSuffix> {
        if symbols.is_empty() {
            return Err(Error::Empty("fixed string"));
        }
        Ok(FixedSuffix(symbols.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Output of one schema run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemaResult {
    pub output: String,
    pub ledger: CostLedger,
    pub trace: Vec<TraceStep>,
    /// Most short-term chunks held at once.
    pub peak_stm: usize,
}

impl SchemaResult {
    fn from_machine(m: Machine) -> SchemaResult {
        SchemaResult {
            output: m.output().to_string(),
            ledger: m.ledger().clone(),
            peak_stm: m.stm().peak(),
            trace: m.trace().to_vec(),
        }
    }

    pub fn proc_total(&self) -> u64 {
        self.ledger.proc_total()
    }
}

fn digit_char(d: u8) -> char {
    char::from(b'0' + d)
}

fn parse_challenge(challenge: &str, key: &KeyMap, opts: &RunOptions) -> Result<Vec<usize>> {
    let symbols = key.alphabet().parse(challenge, opts.normalize)?;
    if symbols.is_empty() {
        return Err(Error::Empty("challenge"));
    }
    Ok(symbols)
}

fn load(m: &mut Machine, symbols: Vec<usize>) -> Result<()> {
    m.load_challenge(symbols);
    m.set_pointer(KEY, Charge::Unlisted)?;
    m.reset_tape(Charge::Unlisted);
    m.hold("cursor", Chunk::Cursor(0))
}

fn advance(m: &mut Machine, charge: Charge) -> Result<()> {
    m.shift_right(charge)?;
    let cursor = m.tape().cursor();
    m.hold("cursor", Chunk::Cursor(cursor))
}

/// Replaces every challenge letter by its digit under `f`.
pub fn letter_substitution(challenge: &str, f: &KeyMap) -> Result<SchemaResult> {
    letter_substitution_with(challenge, f, &RunOptions::default())
}

pub fn letter_substitution_with(challenge: &str, f: &KeyMap, opts: &RunOptions) -> Result<SchemaResult> {
    let symbols = parse_challenge(challenge, f, opts)?;
    run_letter_substitution(symbols, f, opts)
}

fn run_letter_substitution(symbols: Vec<usize>, f: &KeyMap, opts: &RunOptions) -> Result<SchemaResult> {
    let mut m = opts.machine(f);
    load(&mut m, symbols)?;
    while !m.tape().at_end() {
        let v = m.apply_map_at_cursor(KEY, Charge::Listed)?;
        m.hold("value", Chunk::Digit(v))?;
        m.emit(digit_char(v), Charge::Listed);
        advance(&mut m, Charge::Listed)?;
    }
    Ok(SchemaResult::from_machine(m))
}

/// How consecutive repeated letters are handled before substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepeatRule {
    /// Drop a letter equal to its predecessor.
    Skip,
    /// Advance the j-th consecutive repeat by j alphabet positions.
    ShiftUp,
}

/// Applies a [`RepeatRule`] to a symbol sequence over an alphabet of `size` symbols.
pub fn dedup_symbols(symbols: &[usize], rule: RepeatRule, size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut run = 0usize;
    for (i, &s) in symbols.iter().enumerate() {
        let repeat = i > 0 && symbols[i - 1] == s;
        run = if repeat { run + 1 } else { 0 };
        match (rule, repeat) {
            (RepeatRule::Skip, true) => {}
            (RepeatRule::ShiftUp, true) => out.push((s + run) % size),
            _ => out.push(s),
        }
    }
    out
}

/// Letter substitution after removing consecutive repeats by `rule`.
pub fn letter_substitution_dedup(challenge: &str, f: &KeyMap, rule: RepeatRule) -> Result<SchemaResult> {
    let opts = RunOptions::default();
    let symbols = parse_challenge(challenge, f, &opts)?;
    let symbols = dedup_symbols(&symbols, rule, f.alphabet().size());
    run_letter_substitution(symbols, f, &opts)
}

/// One digit (the mod-10 sum of the mapped letters) followed by the fixed string.
pub fn single_digit_single_string(challenge: &str, f: &KeyMap, suffix: &FixedSuffix) -> Result<SchemaResult> {
    single_digit_single_string_with(challenge, f, suffix, &RunOptions::default())
}

pub fn single_digit_single_string_with(
    challenge: &str,
    f: &KeyMap,
    suffix: &FixedSuffix,
    opts: &RunOptions,
) -> Result<SchemaResult> {
    let symbols = parse_challenge(challenge, f, opts)?;
    let mut m = opts.machine(f);
    m.memorize_string(SUFFIX, suffix.as_str());
    // the suffix is part of the key, not of this run's PREP
    m.clear_prep();
    load(&mut m, symbols)?;

    let first = m.apply_map_at_cursor(KEY, Charge::Listed)?;
    m.stm_write("sum", Chunk::Digit(first), Charge::Listed)?;
    advance(&mut m, Charge::Listed)?;
    let mut sum = first;
    while !m.tape().at_end() {
        let v = m.apply_map_at_cursor(KEY, Charge::Listed)?;
        m.hold("value", Chunk::Digit(v))?;
        sum = m.add_mod(sum, v, 10, Charge::Listed)?;
        m.hold("sum", Chunk::Digit(sum))?;
        advance(&mut m, Charge::Unlisted)?;
    }
    m.emit(digit_char(sum), Charge::Listed);
    m.emit_string(SUFFIX, Charge::Listed)?;
    Ok(SchemaResult::from_machine(m))
}

/// `f(c1) - f(c2) + f(c3) - ... (mod 10)`.
pub fn alternating_sum_digit(challenge: &str, f: &KeyMap) -> Result<u8> {
    let symbols = parse_challenge(challenge, f, &RunOptions::default())?;
    let mut sum = 0i32;
    for (i, &s) in symbols.iter().enumerate() {
        let v = f.get(s)? as i32;
        sum += if i % 2 == 0 { v } else { -v };
    }
    Ok(sum.rem_euclid(10) as u8)
}

/// One digit per group of `group` letters: the group's mapped sum mod 10.
/// A short final group is summed as it is.
pub fn grouped_sum_digits(challenge: &str, f: &KeyMap, group: usize) -> Result<String> {
    if group == 0 {
        return Err(Error::Config("group size must be positive".into()));
    }
    let symbols = parse_challenge(challenge, f, &RunOptions::default())?;
    symbols
        .chunks(group)
        .map(|g| {
            let s: u32 = g.iter().map(|&c| f.get(c).map(u32::from)).sum::<Result<u32>>()?;
            Ok(digit_char((s % 10) as u8))
        })
        .collect()
}

/// A Skip-To-My-Lou run: the password plus the running sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StmlRun {
    pub result: SchemaResult,
    /// Running SUM after each challenge symbol.
    pub sums: Vec<u8>,
    /// SUM after the last symbol, whether or not it was emitted.
    pub final_sum: u8,
}

/// Skip-To-My-Lou: keep a running mod-10 sum of mapped symbols, emit it when below 5.
///
/// Without `initial_carry`, the sum starts at the mapped value of the last symbol.
pub fn stml(challenge: &str, x: &KeyMap, initial_carry: Option<u8>) -> Result<StmlRun> {
    stml_with(challenge, x, initial_carry, &RunOptions::default())
}

pub fn stml_with(challenge: &str, x: &KeyMap, initial_carry: Option<u8>, opts: &RunOptions) -> Result<StmlRun> {
    let symbols = parse_challenge(challenge, x, opts)?;
    stml_symbols_with(symbols, x, initial_carry, opts)
}

pub fn stml_symbols_with(
    symbols: Vec<usize>,
    x: &KeyMap,
    initial_carry: Option<u8>,
    opts: &RunOptions,
) -> Result<StmlRun> {
    if symbols.is_empty() {
        return Err(Error::Empty("challenge"));
    }
    if let Some(c) = initial_carry.filter(|&c| c > 9) {
        return Err(Error::NotADigit(c));
    }
    let mut m = opts.machine(x);
    let last = *symbols.last().expect("nonempty");
    load(&mut m, symbols)?;

    let mut sum = match initial_carry {
        Some(c) => c,
        None => m.apply_map(KEY, last, Charge::Unlisted)?,
    };
    m.stm_write("sum", Chunk::Digit(sum), Charge::Unlisted)?;

    let mut sums = Vec::with_capacity(m.tape().len());
    let mut first = true;
    while !m.tape().at_end() {
        let v = m.apply_map_at_cursor(KEY, Charge::Listed)?;
        m.hold("value", Chunk::Digit(v))?;
        sum = m.add_mod(sum, v, 10, Charge::Listed)?;
        m.hold("sum", Chunk::Digit(sum))?;
        sums.push(sum);
        let emission = if first { Charge::Unlisted } else { Charge::Listed };
        if m.compare_lt(sum, 5, emission) {
            m.emit(digit_char(sum), emission);
        }
        advance(&mut m, Charge::Listed)?;
        first = false;
    }
    Ok(StmlRun { result: SchemaResult::from_machine(m), sums, final_sum: sum })
}

/// Machine-free STML over symbol indices: `(emitted digits, final sum)`.
pub fn stml_eval(symbols: &[usize], x: &KeyMap, initial_carry: Option<u8>) -> (Vec<u8>, u8) {
    let mut out = Vec::with_capacity(symbols.len());
    let Some(&last) = symbols.last() else {
        return (out, initial_carry.unwrap_or(0));
    };
    let mut sum = initial_carry.unwrap_or_else(|| x.at(last));
    for &s in symbols {
        sum = (sum + x.at(s)) % 10;
        if sum < 5 {
            out.push(sum);
        }
    }
    (out, sum)
}

/// Word counts of a schema's canonical description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemaDescription {
    pub preprocessing: &'static str,
    pub processing: &'static str,
    pub example: &'static str,
}

impl SchemaDescription {
    pub fn words(&self) -> u64 {
        word_count(self.preprocessing) + word_count(self.processing) + word_count(self.example)
    }
}

pub const LETTER_SUBSTITUTION_DESCRIPTION: SchemaDescription = SchemaDescription {
    preprocessing: "Learn a random map from each letter to one digit.",
    processing: "Read the challenge left to right. For each letter recall its digit \
                 and type that digit. Stop after the last letter.",
    example: "With A=1, B=2 and so on, wrapping so J=0 and K=1, \
              the challenge GMAIL gives 73192 and APPLE gives 16625.",
};

/// COMM breakdown for a schema: description words plus covering example traces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommReport {
    pub description_words: u64,
    pub trace_steps: u64,
    pub total: u64,
}

/// COMM of letter substitution with the canonical description and the
/// GMAIL/APPLE example traces under the alphabet-position map.
pub fn letter_substitution_comm() -> Result<CommReport> {
    let f = KeyMap::alphabet_position();
    let mut trace_steps = 0;
    for challenge in ["GMAIL", "APPLE"] {
        trace_steps += letter_substitution(challenge, &f)?.trace.len() as u64;
    }
    let description_words = LETTER_SUBSTITUTION_DESCRIPTION.words();
    Ok(CommReport { description_words, trace_steps, total: comm_cost(description_words, trace_steps) })
}

/// Schemas selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaId {
    LetterSubstitution,
    SingleDigit,
    Stml,
}

impl std::str::FromStr for SchemaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<SchemaId> {
        match s {
            "letter-sub" | "letter-substitution" => Ok(SchemaId::LetterSubstitution),
            "single-digit" | "sdss" => Ok(SchemaId::SingleDigit),
            "stml" => Ok(SchemaId::Stml),
            other => Err(Error::Config(format!("unknown schema `{other}`"))),
        }
    }
}

impl std::fmt::Display for SchemaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemaId::LetterSubstitution => "letter-sub",
            SchemaId::SingleDigit => "single-digit",
            SchemaId::Stml => "stml",
        })
    }
}
