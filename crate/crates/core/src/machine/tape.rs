use crate::error::{Error, Result};

/// Position of a [`ChallengeTape`] cursor after a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TapeState {
    At(usize),
    End,
}

/// Read surface over a challenge: the cursor moves right or resets to the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChallengeTape {
    symbols: Vec<usize>,
    cursor: usize,
}

impl ChallengeTape {
    pub fn new(symbols: Vec<usize>) -> ChallengeTape {
        ChallengeTape { symbols, cursor: 0 }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn state(&self) -> TapeState {
        if self.cursor < self.symbols.len() {
            TapeState::At(self.cursor)
        } else {
            TapeState::End
        }
    }

    pub fn at_end(&self) -> bool {
        self.state() == TapeState::End
    }

    pub fn current(&self) -> Result<usize> {
        self.symbols.get(self.cursor).copied().ok_or(Error::TapeExhausted)
    }

    /// The whole challenge is visible; the last symbol can be read without moving.
    pub fn last(&self) -> Result<usize> {
        self.symbols.last().copied().ok_or(Error::Empty("challenge"))
    }

    pub fn shift_right(&mut self) -> Result<TapeState> {
        if self.at_end() {
            return Err(Error::TapeExhausted);
        }
        self.cursor += 1;
        Ok(self.state())
    }

    pub fn reset(&mut self) {
        self.cursor = 0;
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }
}
