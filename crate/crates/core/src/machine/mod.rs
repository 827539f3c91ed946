//! The costed human machine.
//!
//! A [`Machine`] owns a short-term memory of two or three chunks, a read-only
//! long-term store, and a challenge tape. Every primitive appends a
//! [`TraceStep`] and charges the [`CostLedger`].

mod ledger;
mod memory;
mod rehearsal;
mod tape;

use std::fmt;

use serde::Serialize;

pub use ledger::{comm_cost, prep_cost, word_count, CostLedger};
pub use memory::{Chunk, LongTermStore, ShortTermMemory};
pub use rehearsal::{rehearsal_times, CalendarUnit, RehearsalSchedule};
pub use tape::{ChallengeTape, TapeState};

use crate::error::{Error, Result};

pub const DEFAULT_STM_CAPACITY: usize = 3;

/// Moduli the machine can reduce by.
pub const SUPPORTED_MODULI: [u8; 7] = [2, 3, 4, 5, 9, 10, 11];

/// Which steps a schema run charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Accounting {
    /// Charge only the steps a schema's published PROC expression enumerates;
    /// the other steps are still traced, at cost 0.
    #[default]
    Formula,
    /// Charge every primitive.
    EveryStep,
}

/// Whether a step appears in the schema's PROC expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Charge {
    Listed,
    Unlisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Primitive {
    SetPointer,
    ShiftRight,
    ResetTape,
    ApplyMap,
    AddMod,
    Compare,
    StmWrite,
    Emit,
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Primitive::SetPointer => "set_pointer",
            Primitive::ShiftRight => "shift_right",
            Primitive::ResetTape => "reset_tape",
            Primitive::ApplyMap => "apply_map",
            Primitive::AddMod => "add_mod",
            Primitive::Compare => "compare",
            Primitive::StmWrite => "stm_write",
            Primitive::Emit => "emit",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub primitive: Primitive,
    pub operands: String,
    pub cost: u32,
    pub cumulative_proc: u64,
}

impl TraceStep {
    /// `index<TAB>primitive<TAB>operands<TAB>cost<TAB>cumulative`.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.index, self.primitive, self.operands, self.cost, self.cumulative_proc
        )
    }
}

/// Result of `a + b (mod m)` and what it cost.
///
/// Costs 1 when the sum is already below the modulus; otherwise a two-symbol
/// intermediate is created and reduced, costing 2.
pub fn add_mod(a: u8, b: u8, modulus: u8) -> Result<(u8, u32)> {
    if !SUPPORTED_MODULI.contains(&modulus) {
        return Err(Error::UnsupportedModulus(modulus));
    }
    let bound = modulus.max(10);
    for x in [a, b] {
        if x >= bound {
            return Err(Error::NotADigit(x));
        }
    }
    let sum = a + b;
    Ok(if sum < modulus { (sum, 1) } else { (sum % modulus, 2) })
}

#[derive(Debug, Clone)]
pub struct Machine {
    stm: ShortTermMemory,
    ltm: LongTermStore,
    tape: ChallengeTape,
    ledger: CostLedger,
    trace: Vec<TraceStep>,
    output: String,
    accounting: Accounting,
    tracing: bool,
}

impl Default for Machine {
    fn default() -> Self {
        Machine::new(DEFAULT_STM_CAPACITY)
    }
}

impl Machine {
    pub fn new(stm_capacity: usize) -> Machine {
        Machine {
            stm: ShortTermMemory::new(stm_capacity),
            ltm: LongTermStore::default(),
            tape: ChallengeTape::new(Vec::new()),
            ledger: CostLedger::default(),
            trace: Vec::new(),
            output: String::new(),
            accounting: Accounting::Formula,
            tracing: true,
        }
    }

    pub fn with_accounting(mut self, accounting: Accounting) -> Machine {
        self.accounting = accounting;
        self
    }

    /// Disables trace recording; the ledger is still kept.
    pub fn without_trace(mut self) -> Machine {
        self.tracing = false;
        self
    }

    pub fn accounting(&self) -> Accounting {
        self.accounting
    }

    /// Preprocessing: memorizes a map, charging PREP for the chunks written.
    pub fn memorize_map(&mut self, name: &str, map: crate::keys::KeyMap) {
        let chunks = self.ltm.memorize_map(name, map);
        self.ledger.record_chunks_written(chunks);
    }

    /// Places an already-memorized map in long-term memory without charging PREP.
    pub fn install_map(&mut self, name: &str, map: crate::keys::KeyMap) {
        self.ltm.memorize_map(name, map);
    }

    pub fn clear_prep(&mut self) {
        self.ledger.die_entropy = 0.0;
        self.ledger.chunks_written = 0;
    }

    /// Preprocessing: memorizes a string as a single chunk.
    pub fn memorize_string(&mut self, name: &str, text: &str) {
        self.ltm.memorize_list(name, text.chars().map(Chunk::Symbol).collect());
        self.ledger.record_chunks_written(1);
    }

    pub fn load_challenge(&mut self, symbols: Vec<usize>) {
        self.tape = ChallengeTape::new(symbols);
    }

    pub fn ltm(&self) -> &LongTermStore {
        &self.ltm
    }

    pub fn stm(&self) -> &ShortTermMemory {
        &self.stm
    }

    pub fn stm_mut(&mut self) -> &mut ShortTermMemory {
        &mut self.stm
    }

    pub fn tape(&self) -> &ChallengeTape {
        &self.tape
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    /// Clears the tape, short-term memory, trace, output and PROC counters;
    /// long-term memory and PREP survive.
    pub fn reset_run(&mut self) {
        self.stm.clear();
        self.tape = ChallengeTape::new(Vec::new());
        self.trace.clear();
        self.output.clear();
        self.ledger.ltm_reads = 0;
        self.ledger.stm_ops = 0;
    }

    fn charge(&self, charge: Charge, cost: u32) -> u32 {
        match (self.accounting, charge) {
            (Accounting::Formula, Charge::Unlisted) => 0,
            _ => cost,
        }
    }

    fn record(&mut self, primitive: Primitive, operands: impl FnOnce() -> String, cost: u32, long_term: bool) {
        if long_term {
            self.ledger.ltm_reads += cost as u64;
        } else {
            self.ledger.stm_ops += cost as u64;
        }
        if self.tracing {
            self.trace.push(TraceStep {
                index: self.trace.len(),
                primitive,
                operands: operands(),
                cost,
                cumulative_proc: self.ledger.proc_total(),
            });
        }
    }

    /// Points at an item already in long-term memory. Cost 1.
    pub fn set_pointer(&mut self, target: &str, charge: Charge) -> Result<Chunk> {
        if !self.ltm.contains(target) {
            return Err(Error::MissingItem(target.to_string()));
        }
        let cost = self.charge(charge, 1);
        self.record(Primitive::SetPointer, || target.to_string(), cost, true);
        Ok(Chunk::Ref(target.to_string()))
    }

    /// Moves the tape cursor one symbol right. Cost 1.
    pub fn shift_right(&mut self, charge: Charge) -> Result<TapeState> {
        let state = self.tape.shift_right()?;
        let cost = self.charge(charge, 1);
        let cursor = self.tape.cursor();
        self.record(Primitive::ShiftRight, || format!("@{cursor}"), cost, false);
        Ok(state)
    }

    /// Returns the tape cursor to the first symbol. Cost 1.
    pub fn reset_tape(&mut self, charge: Charge) {
        self.tape.reset();
        let cost = self.charge(charge, 1);
        self.record(Primitive::ResetTape, || "@0".to_string(), cost, false);
    }

    /// Reads the image of `symbol` under a memorized map. Cost 1 (long-term read).
    pub fn apply_map(&mut self, map: &str, symbol: usize, charge: Charge) -> Result<u8> {
        let image = self.ltm.map(map)?.get(symbol)?;
        let cost = self.charge(charge, 1);
        self.record(Primitive::ApplyMap, || format!("{map}({symbol})={image}"), cost, true);
        Ok(image)
    }

    /// Applies `map` to the symbol under the tape cursor.
    pub fn apply_map_at_cursor(&mut self, map: &str, charge: Charge) -> Result<u8> {
        let symbol = self.tape.current()?;
        self.apply_map(map, symbol, charge)
    }

    /// `a + b (mod m)`, costed by [`add_mod`].
    pub fn add_mod(&mut self, a: u8, b: u8, modulus: u8, charge: Charge) -> Result<u8> {
        let (sum, raw) = add_mod(a, b, modulus)?;
        let cost = self.charge(charge, raw);
        self.record(Primitive::AddMod, || format!("{a}+{b} mod {modulus}={sum}"), cost, false);
        Ok(sum)
    }

    /// `a =? b` on single digits. Cost 1.
    pub fn compare_eq(&mut self, a: u8, b: u8, charge: Charge) -> bool {
        let cost = self.charge(charge, 1);
        self.record(Primitive::Compare, || format!("{a}=?{b}"), cost, false);
        a == b
    }

    /// `a <? b` on single digits. Cost 1.
    pub fn compare_lt(&mut self, a: u8, b: u8, charge: Charge) -> bool {
        let cost = self.charge(charge, 1);
        self.record(Primitive::Compare, || format!("{a}<?{b}"), cost, false);
        a < b
    }

    /// Writes a chunk into a short-term slot. Cost 1.
    pub fn stm_write(&mut self, slot: &'static str, chunk: Chunk, charge: Charge) -> Result<()> {
        let shown = chunk.to_string();
        self.stm.hold(slot, chunk)?;
        let cost = self.charge(charge, 1);
        self.record(Primitive::StmWrite, || format!("{slot}<-{shown}"), cost, false);
        Ok(())
    }

    /// Places a chunk in a slot as a side effect of another costed step.
    pub fn hold(&mut self, slot: &'static str, chunk: Chunk) -> Result<()> {
        self.stm.hold(slot, chunk)
    }

    /// Writes one output symbol. Cost 1.
    pub fn emit(&mut self, symbol: char, charge: Charge) {
        self.output.push(symbol);
        let cost = self.charge(charge, 1);
        self.record(Primitive::Emit, || symbol.to_string(), cost, false);
    }

    /// Emits a memorized string symbol by symbol, one unit per symbol.
    pub fn emit_string(&mut self, name: &str, charge: Charge) -> Result<()> {
        let symbols: Vec<char> = self
            .ltm
            .list(name)?
            .iter()
            .map(|c| match c {
                Chunk::Symbol(s) | Chunk::Letter(s) => *s,
                Chunk::Digit(d) => char::from(b'0' + d),
                _ => '?',
            })
            .collect();
        for s in symbols {
            self.emit(s, charge);
        }
        Ok(())
    }

    pub fn trace_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.trace {
            out.push_str(&step.to_line());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keys::{Alphabet, KeyMap};

    fn machine() -> Machine {
        let mut m = Machine::default();
        m.memorize_map("f", KeyMap::alphabet_position());
        m
    }

    #[test]
    fn set_pointer_costs_one() {
        let mut m = machine();
        assert_eq!(m.set_pointer("f", Charge::Listed).unwrap(), Chunk::Ref("f".into()));
        assert_eq!(m.ledger().proc_total(), 1);
        assert_eq!(m.ledger().ltm_reads, 1);
        m.set_pointer("f", Charge::Listed).unwrap();
        assert_eq!(m.ledger().proc_total(), 2);
        assert!(matches!(m.set_pointer("x", Charge::Listed), Err(Error::MissingItem(_))));
    }

    #[test]
    fn apply_map_examples() {
        let mut m = machine();
        m.memorize_map("T", KeyMap::affine_digits(1, 1));
        assert_eq!(m.apply_map("f", 6, Charge::Listed).unwrap(), 7);
        assert_eq!(m.apply_map("f", 0, Charge::Listed).unwrap(), 1);
        assert_eq!(m.apply_map("T", 9, Charge::Listed).unwrap(), 0);
        assert_eq!(m.ledger().ltm_reads, 3);
        assert!(matches!(m.apply_map("f", 26, Charge::Listed), Err(Error::Domain { .. })));
    }

    #[test]
    fn add_mod_examples() {
        assert_eq!(add_mod(4, 3, 10).unwrap(), (7, 1));
        assert_eq!(add_mod(4, 9, 10).unwrap(), (3, 2));
        assert_eq!(add_mod(0, 0, 10).unwrap(), (0, 1));
        assert_eq!(add_mod(1, 1, 7), Err(Error::UnsupportedModulus(7)));
        assert_eq!(add_mod(10, 1, 11).unwrap(), (0, 2));
        assert!(add_mod(10, 1, 10).is_err());
    }

    #[test]
    fn add_mod_cost_rule_exhaustive() {
        for m in SUPPORTED_MODULI {
            let bound = m.max(10);
            for a in 0..bound {
                for b in 0..bound {
                    let (sum, cost) = add_mod(a, b, m).unwrap();
                    assert_eq!(sum, (a + b) % m);
                    assert_eq!(cost, if a + b >= m { 2 } else { 1 });
                }
            }
        }
    }

    #[test]
    fn comparisons_cost_one_each() {
        let mut m = Machine::default();
        assert!(!m.compare_eq(4, 3, Charge::Listed));
        assert!(m.compare_eq(5, 5, Charge::Listed));
        assert!(m.compare_lt(4, 5, Charge::Listed));
        assert_eq!(m.ledger().proc_total(), 3);
    }

    #[test]
    fn formula_accounting_traces_unlisted_steps_at_zero() {
        let mut m = machine();
        m.set_pointer("f", Charge::Unlisted).unwrap();
        assert_eq!(m.ledger().proc_total(), 0);
        assert_eq!(m.trace().len(), 1);
        assert_eq!(m.trace()[0].cost, 0);

        let mut strict = Machine::default().with_accounting(Accounting::EveryStep);
        strict.memorize_map("f", KeyMap::alphabet_position());
        strict.set_pointer("f", Charge::Unlisted).unwrap();
        assert_eq!(strict.ledger().proc_total(), 1);
    }

    #[test]
    fn trace_lines_and_cumulative() {
        let mut m = machine();
        m.load_challenge(Alphabet::LATIN.parse("GM", false).unwrap());
        m.apply_map_at_cursor("f", Charge::Listed).unwrap();
        m.add_mod(7, 3, 10, Charge::Listed).unwrap();
        m.shift_right(Charge::Listed).unwrap();
        let lines = m.trace_lines();
        let rows: Vec<&str> = lines.lines().collect();
        assert_eq!(rows[0], "0\tapply_map\tf(6)=7\t1\t1");
        assert_eq!(rows[1], "1\tadd_mod\t7+3 mod 10=0\t2\t3");
        assert_eq!(rows[2], "2\tshift_right\t@1\t1\t4");
    }

    #[test]
    fn tape_exhaustion_through_machine() {
        let mut m = Machine::default();
        m.load_challenge(vec![1]);
        assert_eq!(m.shift_right(Charge::Listed).unwrap(), TapeState::End);
        assert_eq!(m.shift_right(Charge::Listed), Err(Error::TapeExhausted));
    }
}
