use serde::{Deserialize, Serialize};

/// Running cost totals of one machine.
///
/// PROC counts long-term reads plus short-term reads and writes. PREP counts
/// die-toss entropy plus chunks written to long-term memory. COMM counts
/// description length plus example trace length.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    pub ltm_reads: u64,
    pub stm_ops: u64,
    /// Bits: tosses times `log2(sides)`.
    pub die_entropy: f64,
    pub chunks_written: u64,
    pub comm_units: u64,
}

impl CostLedger {
    pub fn proc_total(&self) -> u64 {
        self.ltm_reads + self.stm_ops
    }

    pub fn prep_total(&self) -> f64 {
        self.die_entropy + self.chunks_written as f64
    }

    pub fn record_die_tosses(&mut self, tosses: u64, sides: u64) {
        self.die_entropy += prep_cost(tosses, sides, 0);
    }

    pub fn record_chunks_written(&mut self, chunks: u64) {
        self.chunks_written += chunks;
    }

    pub fn record_comm(&mut self, units: u64) {
        self.comm_units += units;
    }

    /// Adds every counter of `other` into `self`.
    pub fn absorb(&mut self, other: &CostLedger) {
        self.ltm_reads += other.ltm_reads;
        self.stm_ops += other.stm_ops;
        self.die_entropy += other.die_entropy;
        self.chunks_written += other.chunks_written;
        self.comm_units += other.comm_units;
    }

    /// Key/value report, one JSON object.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ltm_reads": self.ltm_reads,
            "stm_ops": self.stm_ops,
            "proc_total": self.proc_total(),
            "die_entropy": self.die_entropy,
            "chunks_written": self.chunks_written,
            "prep_total": self.prep_total(),
            "comm_units": self.comm_units,
        })
    }
}

/// `tosses * log2(sides) + chunks_written`.
pub fn prep_cost(die_tosses: u64, die_sides: u64, chunks_written: u64) -> f64 {
    let entropy = if die_tosses == 0 || die_sides <= 1 {
        0.0
    } else {
        die_tosses as f64 * (die_sides as f64).log2()
    };
    entropy + chunks_written as f64
}

/// Description length plus total trace length.
pub fn comm_cost(description_units: u64, trace_steps: u64) -> u64 {
    description_units + trace_steps
}

/// Number of whitespace-separated words in a description.
pub fn word_count(text: &str) -> u64 {
    text.split_whitespace().count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prep_examples() {
        assert_eq!(prep_cost(0, 10, 272), 272.0);
        assert_eq!(prep_cost(0, 10, 108), 108.0);
        let key = prep_cost(26, 10, 52);
        assert!((key - (26.0 * 10f64.log2() + 52.0)).abs() < 1e-12);
        assert!((key - 138.37).abs() < 0.01);
    }

    #[test]
    fn comm_examples() {
        assert_eq!(comm_cost(0, 0), 0);
        assert_eq!(comm_cost(10 + 40 + 60, 2 * (2 + 3 * 5)), 144);
    }

    #[test]
    fn die_entropy_accumulates() {
        let mut l = CostLedger::default();
        l.record_die_tosses(26, 10);
        l.record_chunks_written(52);
        assert!((l.prep_total() - prep_cost(26, 10, 52)).abs() < 1e-12);
        assert_eq!(l.to_json()["chunks_written"], 52);
    }
}
