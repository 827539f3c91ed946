use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::keys::KeyMap;

/// One addressable unit of short-term memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chunk {
    Digit(u8),
    Letter(char),
    Symbol(char),
    /// Pointer to a stored string or map; a memorized string is a single chunk.
    Ref(String),
    /// Pointer into the challenge tape.
    Cursor(usize),
}

impl fmt::Display for Chunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chunk::Digit(d) => write!(f, "{d}"),
            Chunk::Letter(c) | Chunk::Symbol(c) => write!(f, "{c}"),
            Chunk::Ref(name) => write!(f, "&{name}"),
            Chunk::Cursor(i) => write!(f, "@{i}"),
        }
    }
}

/// Named slots holding at most `capacity` chunks.
#[derive(Debug, Clone)]
pub struct ShortTermMemory {
    slots: Vec<(&'static str, Chunk)>,
    capacity: usize,
    peak: usize,
}

impl ShortTermMemory {
    pub fn new(capacity: usize) -> ShortTermMemory {
        ShortTermMemory { slots: Vec::with_capacity(capacity), capacity, peak: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn occupied(&self) -> usize {
        self.slots.len()
    }

    /// Largest occupancy seen since construction.
    pub fn peak(&self) -> usize {
        self.peak
    }

    /// Stores `chunk` under `slot`, overwriting an existing slot of that name.
    pub fn hold(&mut self, slot: &'static str, chunk: Chunk) -> Result<()> {
        if let Some(entry) = self.slots.iter_mut().find(|(name, _)| *name == slot) {
            entry.1 = chunk;
            return Ok(());
        }
        if self.slots.len() == self.capacity {
            return Err(Error::Capacity { needed: self.slots.len() + 1, capacity: self.capacity });
        }
        self.slots.push((slot, chunk));
        self.peak = self.peak.max(self.slots.len());
        Ok(())
    }

    pub fn get(&self, slot: &str) -> Option<&Chunk> {
        self.slots.iter().find(|(name, _)| *name == slot).map(|(_, c)| c)
    }

    pub fn release(&mut self, slot: &str) {
        self.slots.retain(|(name, _)| *name != slot);
    }

    pub fn clear(&mut self) {
        self.slots.clear();
    }
}

/// Permanent memory: named chunk lists and hash functions.
#[derive(Debug, Clone, Default)]
pub struct LongTermStore {
    lists: BTreeMap<String, Vec<Chunk>>,
    maps: BTreeMap<String, KeyMap>,
}

impl LongTermStore {
    /// Memorizes a map; returns the number of chunks written (two per pair).
    pub fn memorize_map(&mut self, name: &str, map: KeyMap) -> u64 {
        let chunks = 2 * map.images().len() as u64;
        self.maps.insert(name.to_string(), map);
        chunks
    }

    /// Memorizes a list; returns the number of chunks written.
    pub fn memorize_list(&mut self, name: &str, items: Vec<Chunk>) -> u64 {
        let chunks = items.len() as u64;
        self.lists.insert(name.to_string(), items);
        chunks
    }

    pub fn contains(&self, name: &str) -> bool {
        self.maps.contains_key(name) || self.lists.contains_key(name)
    }

    pub fn map(&self, name: &str) -> Result<&KeyMap> {
        self.maps.get(name).ok_or_else(|| Error::MissingItem(name.to_string()))
    }

    pub fn list(&self, name: &str) -> Result<&[Chunk]> {
        self.lists.get(name).map(Vec::as_slice).ok_or_else(|| Error::MissingItem(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_a_hard_limit() {
        let mut stm = ShortTermMemory::new(2);
        stm.hold("a", Chunk::Digit(1)).unwrap();
        stm.hold("b", Chunk::Digit(2)).unwrap();
        stm.hold("a", Chunk::Digit(3)).unwrap();
        assert_eq!(stm.get("a"), Some(&Chunk::Digit(3)));
        assert_eq!(stm.hold("c", Chunk::Digit(4)), Err(Error::Capacity { needed: 3, capacity: 2 }));
        stm.release("b");
        stm.hold("c", Chunk::Digit(4)).unwrap();
        assert_eq!(stm.peak(), 2);
    }

    #[test]
    fn memorizing_counts_chunks() {
        let mut ltm = LongTermStore::default();
        assert_eq!(ltm.memorize_map("f", KeyMap::alphabet_position()), 52);
        let words: Vec<Chunk> = (0..272).map(|i| Chunk::Ref(format!("w{i}"))).collect();
        assert_eq!(ltm.memorize_list("gettysburg", words), 272);
        assert!(ltm.map("g").is_err());
    }
}
