use std::collections::HashMap;
use std::str::FromStr;

use crate::error::{Error, Result};

const QWERTY: &str = include_str!("qwerty.layout");

/// One finger displacement on a staggered keyboard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    UpLeft,
    UpRight,
    DownLeft,
    DownRight,
}

impl Move {
    /// Row and column delta. Rows are staggered half a key to the right
    /// going down, so the two upward moves differ by one column.
    fn delta(self) -> (i32, i32) {
        match self {
            Move::Left => (0, -1),
            Move::Right => (0, 1),
            Move::UpLeft => (-1, 0),
            Move::UpRight => (-1, 1),
            Move::DownLeft => (1, -1),
            Move::DownRight => (1, 0),
        }
    }

    pub fn inverse(self) -> Move {
        match self {
            Move::Left => Move::Right,
            Move::Right => Move::Left,
            Move::UpLeft => Move::DownRight,
            Move::UpRight => Move::DownLeft,
            Move::DownLeft => Move::UpRight,
            Move::DownRight => Move::UpLeft,
        }
    }

    /// Same horizontal sense, opposite vertical sense.
    pub fn flipped(self) -> Move {
        match self {
            Move::UpLeft => Move::DownLeft,
            Move::UpRight => Move::DownRight,
            Move::DownLeft => Move::UpLeft,
            Move::DownRight => Move::UpRight,
            m => m,
        }
    }
}

/// Parses moves written as arrows (`→↗`) or comma-separated names (`r,ur`).
pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    let text = text.trim();
    if text.chars().any(|c| "←→↖↗↙↘".contains(c)) {
        return text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '←' => Ok(Move::Left),
                '→' => Ok(Move::Right),
                '↖' => Ok(Move::UpLeft),
                '↗' => Ok(Move::UpRight),
                '↙' => Ok(Move::DownLeft),
                '↘' => Ok(Move::DownRight),
                other => Err(Error::Parse(format!("unknown move `{other}`"))),
            })
            .collect();
    }
    text.split([',', ' ']).filter(|s| !s.is_empty()).map(Move::from_str).collect()
}

impl FromStr for Move {
    type Err = Error;
    fn from_str(s: &str) -> Result<Move> {
        match s.to_ascii_lowercase().as_str() {
            "l" | "left" => Ok(Move::Left),
            "r" | "right" => Ok(Move::Right),
            "ul" | "upleft" => Ok(Move::UpLeft),
            "ur" | "upright" => Ok(Move::UpRight),
            "dl" | "downleft" => Ok(Move::DownLeft),
            "dr" | "downright" => Ok(Move::DownRight),
            other => Err(Error::Parse(format!("unknown move `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyPosition {
    pub row: i32,
    pub col: i32,
    /// 0 unshifted, 1 shifted.
    pub layer: u8,
}

/// Character to key-position table.
#[derive(Debug, Clone)]
pub struct KeyboardLayout {
    positions: HashMap<char, KeyPosition>,
    keys: HashMap<KeyPosition, char>,
}

impl KeyboardLayout {
    /// The bundled US QWERTY table, including the shifted layer.
    pub fn qwerty() -> KeyboardLayout {
        KeyboardLayout::parse(QWERTY).expect("bundled layout is well formed")
    }

    /// Reads `<char> <row> <col> <layer>` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<KeyboardLayout> {
        let mut layout = KeyboardLayout { positions: HashMap::new(), keys: HashMap::new() };
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Layout(format!("line {}: `{line}`", n + 1));
            let [ch, row, col, layer] = fields[..] else { return Err(bad()) };
            let mut chars = ch.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else { return Err(bad()) };
            let pos = KeyPosition {
                row: row.parse().map_err(|_| bad())?,
                col: col.parse().map_err(|_| bad())?,
                layer: layer.parse().map_err(|_| bad())?,
            };
            if layout.keys.insert(pos, c).is_some() || layout.positions.insert(c, pos).is_some() {
                return Err(Error::Layout(format!("line {}: duplicate key", n + 1)));
            }
        }
        Ok(layout)
    }

    pub fn position(&self, c: char) -> Option<KeyPosition> {
        self.positions.get(&c).copied()
    }

    pub fn key_at(&self, pos: KeyPosition) -> Option<char> {
        self.keys.get(&pos).copied()
    }

    /// The character reached from `c` by applying `moves` in order.
    pub fn displace(&self, c: char, moves: &[Move]) -> Result<char> {
        let start = self.position(c).ok_or_else(|| Error::Layout(format!("`{c}` is not on the layout")))?;
        let mut pos = start;
        for m in moves {
            let (dr, dc) = m.delta();
            pos = KeyPosition { row: pos.row + dr, col: pos.col + dc, layer: pos.layer };
        }
        self.key_at(pos).ok_or_else(|| Error::Layout(format!("`{c}` moved off the keyboard")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_letter_and_digit_is_placed() {
        let kb = KeyboardLayout::qwerty();
        for c in ('a'..='z').chain('A'..='Z').chain('0'..='9') {
            assert!(kb.position(c).is_some(), "{c}");
        }
        for c in "[]=-;',./@!".chars() {
            assert!(kb.position(c).is_some(), "{c}");
        }
    }

    #[test]
    fn staggered_neighbours() {
        let kb = KeyboardLayout::qwerty();
        assert_eq!(kb.displace('a', &[Move::UpLeft]).unwrap(), 'q');
        assert_eq!(kb.displace('a', &[Move::UpRight]).unwrap(), 'w');
        assert_eq!(kb.displace('d', &[Move::DownRight]).unwrap(), 'c');
        assert_eq!(kb.displace('d', &[Move::DownLeft]).unwrap(), 'x');
        assert_eq!(kb.displace('P', &[Move::Right]).unwrap(), '{');
        assert!(kb.displace('=', &[Move::Right]).is_err());
    }

    #[test]
    fn move_parsing() {
        assert_eq!(parse_moves("→↗").unwrap(), vec![Move::Right, Move::UpRight]);
        assert_eq!(parse_moves("r,ur").unwrap(), vec![Move::Right, Move::UpRight]);
        assert!(parse_moves("x").is_err());
    }

    #[test]
    fn layout_parse_errors() {
        assert!(KeyboardLayout::parse("a 0 0").is_err());
        assert!(KeyboardLayout::parse("a 0 0 0\nb 0 0 0").is_err());
        assert!(KeyboardLayout::parse("ab 0 0 0").is_err());
    }
}
