use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Finite alphabet `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
}

pub const MAX_ALPHABET: usize = 36;

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&size) {
            return Err(invalid(format!(
                "alphabet size must be in 2..={MAX_ALPHABET}, got {size}"
            )));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> {
        0..self.size as u8
    }
}

/// A finite word. Symbols are stored raw; the owning alphabet is checked by
/// the operations that receive the word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(pub Vec<u8>);

pub fn symbol_char(s: u8) -> char {
    std::char::from_digit(s as u32, MAX_ALPHABET as u32).unwrap_or('?')
}

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    /// Parses a word written with one character per symbol (`0-9`, then `a-z`).
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(MAX_ALPHABET as u32)
                .ok_or_else(|| invalid(format!("bad symbol {c:?} in word {s:?}")))?;
            out.push(d as u8);
        }
        Ok(Word(out))
    }

    pub fn parse_in(s: &str, alphabet: Alphabet) -> Result<Self> {
        let w = Self::parse(s)?;
        w.check(alphabet)?;
        if w.is_empty() {
            return Err(invalid("empty word"));
        }
        Ok(w)
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        if let Some(&s) = self.0.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(invalid(format!(
                "symbol {s} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = crate::error::Error;
    fn try_from(s: String) -> Result<Self> {
        Word::parse(&s)
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

impl std::ops::Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

pub fn fmt_word(w: &[u8]) -> String {
    w.iter().map(|&s| symbol_char(s)).collect()
}

/// Advances `w` to the next word of the same length in lexicographic order.
/// Returns false after the last word.
pub fn next_word(w: &mut [u8], alphabet: usize) -> bool {
    for i in (0..w.len()).rev() {
        if (w[i] as usize) + 1 < alphabet {
            w[i] += 1;
            return true;
        }
        w[i] = 0;
    }
    false
}

/// True when `w[..len-s] == w[s..]`, i.e. `w` overlaps itself at shift `s`.
pub fn has_border_at(w: &[u8], s: usize) -> bool {
    s < w.len() && w[s..] == w[..w.len() - s]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        let w = Word::parse("0a19").unwrap();
        assert_eq!(w.0, vec![0, 10, 1, 9]);
        assert_eq!(w.to_string(), "0a19");
        assert!(Word::parse("0-1").is_err());
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        let a = Alphabet::new(2).unwrap();
        assert!(Word::parse_in("012", a).is_err());
        assert!(Word::parse_in("", a).is_err());
    }

    #[test]
    fn lex_successor() {
        let mut w = vec![0, 1];
        assert!(next_word(&mut w, 2));
        assert_eq!(w, vec![1, 0]);
        assert!(next_word(&mut w, 2));
        assert!(!next_word(&mut w, 2));
        assert_eq!(w, vec![0, 0]);
    }
}
