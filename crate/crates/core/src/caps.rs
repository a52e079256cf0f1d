use serde::Serialize;

use crate::error::{Error, Result};

/// Enumeration limits. Exceeding any of them is an error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Maximum number of words (or block states) enumerated in one pass.
    pub states: u64,
    /// Maximum word length generated for substitution and Sturmian systems.
    pub word_len: usize,
    /// Node budget for exact combinatorial searches (set cover, IP search).
    pub search_nodes: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            states: 1 << 24,
            word_len: 1 << 14,
            search_nodes: 50_000_000,
        }
    }
}

impl Caps {
    pub fn check_states(&self, what: &str, requested: u128) -> Result<()> {
        if requested > self.states as u128 {
            return Err(Error::cap(what, self.states as u128, requested));
        }
        Ok(())
    }

    pub fn check_len(&self, what: &str, requested: usize) -> Result<()> {
        if requested > self.word_len {
            return Err(Error::cap(what, self.word_len as u128, requested as u128));
        }
        Ok(())
    }
}
