use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// A finite word over the alphabet {1, 2, 3}.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid symbol {byte:#04x} at offset {offset}; words use the letters 1, 2, 3")]
pub struct WordParseError {
    pub offset: usize,
    pub byte: u8,
}

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from symbol values 1..=3.
    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self, WordParseError> {
        if let Some((offset, &b)) = symbols.iter().enumerate().find(|(_, &s)| !(1..=3).contains(&s)) {
            return Err(WordParseError { offset, byte: b });
        }
        Ok(Word(symbols))
    }

    /// Parses ASCII text such as `"3123113122"`.
    pub fn parse_ascii(bytes: &[u8]) -> Result<Self, WordParseError> {
        let mut out = Vec::with_capacity(bytes.len());
        for (offset, &b) in bytes.iter().enumerate() {
            match b {
                b'1'..=b'3' => out.push(b - b'0'),
                _ => return Err(WordParseError { offset, byte: b }),
            }
        }
        Ok(Word(out))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: u8) {
        assert!((1..=3).contains(&s), "symbol out of range");
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Number of occurrences of each letter.
    pub fn letter_counts(&self) -> [u64; 3] {
        let mut c = [0u64; 3];
        for &s in &self.0 {
            c[(s - 1) as usize] += 1;
        }
        c
    }
}

impl FromStr for Word {
    type Err = WordParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_ascii(s.as_bytes())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| (b + b'0') as char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
