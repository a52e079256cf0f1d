use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Result};
use crate::symcore::word::{fmt_word, next_word, Word};

/// A finite union of cylinders, stored canonically as the set of words it
/// allows on a common window `[lo, lo + width)`. Coordinates on which the set
/// is a full product are dropped from both ends, so two unions describing the
/// same subset of the full shift have identical representations.
///
/// The whole space is the empty window with the single empty word; the empty
/// set has no words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CylinderUnion {
    alphabet: usize,
    lo: i64,
    width: usize,
    #[serde(serialize_with = "ser_words")]
    words: BTreeSet<Vec<u8>>,
}

fn ser_words<S: serde::Serializer>(
    w: &BTreeSet<Vec<u8>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().map(|x| fmt_word(x)))
}

impl CylinderUnion {
    pub fn whole(alphabet: usize) -> Self {
        CylinderUnion {
            alphabet,
            lo: 0,
            width: 0,
            words: BTreeSet::from([Vec::new()]),
        }
    }

    pub fn empty(alphabet: usize) -> Self {
        CylinderUnion {
            alphabet,
            lo: 0,
            width: 0,
            words: BTreeSet::new(),
        }
    }

    /// The cylinder `{x : x[pos..pos+|w|) = w}`.
    pub fn cylinder(alphabet: usize, pos: i64, word: &[u8]) -> Self {
        Self::from_words(alphabet, pos, word.len(), [word.to_vec()])
    }

    /// Union of `(position, word)` cylinders.
    pub fn from_cylinders(alphabet: usize, cyls: &[(i64, Word)], caps: &Caps) -> Result<Self> {
        if cyls.is_empty() {
            return Ok(Self::empty(alphabet));
        }
        for (_, w) in cyls {
            if w.iter().any(|&s| s as usize >= alphabet) {
                return Err(invalid(format!("word {w} outside alphabet of size {alphabet}")));
            }
        }
        let lo = cyls.iter().map(|(p, _)| *p).min().unwrap();
        let hi = cyls.iter().map(|(p, w)| p + w.len() as i64).max().unwrap();
        let width = (hi - lo) as usize;
        let mut words = BTreeSet::new();
        for (p, w) in cyls {
            let free = width - w.len();
            let count = (alphabet as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
            caps.check_states("cylinder expansion", count + words.len() as u128)?;
            let left = (p - lo) as usize;
            pad_into(&mut words, w, left, width - left - w.len(), alphabet);
        }
        Ok(Self::from_words(alphabet, lo, width, words))
    }

    /// Canonical union of the given words placed on `[lo, lo + width)`.
    pub fn from_words(
        alphabet: usize,
        lo: i64,
        width: usize,
        words: impl IntoIterator<Item = Vec<u8>>,
    ) -> Self {
        let words: BTreeSet<Vec<u8>> = words.into_iter().collect();
        debug_assert!(words.iter().all(|w| w.len() == width));
        let mut u = CylinderUnion {
            alphabet,
            lo,
            width,
            words,
        };
        u.reduce();
        u
    }

    fn reduce(&mut self) {
        if self.words.is_empty() {
            self.lo = 0;
            self.width = 0;
            return;
        }
        let a = self.alphabet;
        while self.width > 0 {
            let tails: BTreeSet<Vec<u8>> = self.words.iter().map(|w| w[1..].to_vec()).collect();
            if self.words.len() == a * tails.len() {
                self.words = tails;
                self.lo += 1;
                self.width -= 1;
                continue;
            }
            let heads: BTreeSet<Vec<u8>> =
                self.words.iter().map(|w| w[..w.len() - 1].to_vec()).collect();
            if self.words.len() == a * heads.len() {
                self.words = heads;
                self.width -= 1;
                continue;
            }
            break;
        }
        if self.width == 0 {
            self.lo = 0;
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.width as i64
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &BTreeSet<Vec<u8>> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.width == 0 && !self.words.is_empty()
    }

    /// Membership of any point whose coordinates `[block_lo, block_lo+|block|)`
    /// equal `block`; the block must cover this union's window.
    pub fn contains_block(&self, block: &[u8], block_lo: i64) -> bool {
        if self.words.is_empty() {
            return false;
        }
        if self.width == 0 {
            return true;
        }
        let start = self.lo - block_lo;
        assert!(
            start >= 0 && start as usize + self.width <= block.len(),
            "block does not cover the cylinder window"
        );
        let s = start as usize;
        self.words.contains(&block[s..s + self.width])
    }

    /// `T^{-j}` of this set: membership of `x` is membership of `T^j x`.
    pub fn shifted(&self, j: i64) -> Self {
        let mut u = self.clone();
        if u.width > 0 {
            u.lo += j;
        }
        u
    }

    /// All words of this set on a window containing its own.
    pub fn expand_to(&self, lo: i64, width: usize, caps: &Caps) -> Result<BTreeSet<Vec<u8>>> {
        if self.words.is_empty() {
            return Ok(BTreeSet::new());
        }
        let (slo, shi) = if self.width == 0 { (lo, lo) } else { (self.lo, self.hi()) };
        if slo < lo || shi > lo + width as i64 {
            return Err(invalid("expansion window does not contain the cylinder window"));
        }
        let free = width - (shi - slo) as usize;
        let count = (self.alphabet as u128).checked_pow(free as u32).unwrap_or(u128::MAX)
            * self.words.len() as u128;
        caps.check_states("cylinder expansion", count)?;
        let left = (slo - lo) as usize;
        let right = free - left;
        let mut out = BTreeSet::new();
        for w in &self.words {
            pad_into(&mut out, w, left, right, self.alphabet);
        }
        Ok(out)
    }

    /// Smallest window covering every union in the list (the whole space
    /// contributes nothing).
    pub fn common_window<'a>(items: impl IntoIterator<Item = &'a CylinderUnion>) -> (i64, usize) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for u in items {
            if u.width > 0 {
                lo = lo.min(u.lo);
                hi = hi.max(u.hi());
            }
        }
        if lo == i64::MAX {
            (0, 0)
        } else {
            (lo, (hi - lo) as usize)
        }
    }

    pub fn union(&self, other: &Self, caps: &Caps) -> Result<Self> {
        let (lo, w) = Self::common_window([self, other]);
        let mut a = self.expand_to(lo, w, caps)?;
        a.extend(other.expand_to(lo, w, caps)?);
        Ok(Self::from_words(self.alphabet, lo, w, a))
    }

    pub fn intersection(&self, other: &Self, caps: &Caps) -> Result<Self> {
        let (lo, w) = Self::common_window([self, other]);
        let a = self.expand_to(lo, w, caps)?;
        let b = other.expand_to(lo, w, caps)?;
        Ok(Self::from_words(self.alphabet, lo, w, a.intersection(&b).cloned()))
    }

    /// Complement in the full shift.
    pub fn complement(&self, caps: &Caps) -> Result<Self> {
        if self.words.is_empty() {
            return Ok(Self::whole(self.alphabet));
        }
        if self.width == 0 {
            return Ok(Self::empty(self.alphabet));
        }
        let all = Self::whole(self.alphabet).expand_to(self.lo, self.width, caps)?;
        Ok(Self::from_words(
            self.alphabet,
            self.lo,
            self.width,
            all.difference(&self.words).cloned(),
        ))
    }
}

/// Inserts every word `l w r` with `|l| = left`, `|r| = right`.
fn pad_into(out: &mut BTreeSet<Vec<u8>>, w: &[u8], left: usize, right: usize, alphabet: usize) {
    let mut l = vec![0u8; left];
    loop {
        let mut r = vec![0u8; right];
        loop {
            let mut full = Vec::with_capacity(left + w.len() + right);
            full.extend_from_slice(&l);
            full.extend_from_slice(w);
            full.extend_from_slice(&r);
            out.insert(full);
            if !next_word(&mut r, alphabet) {
                break;
            }
        }
        if !next_word(&mut l, alphabet) {
            break;
        }
    }
}

impl fmt::Display for CylinderUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "empty");
        }
        if self.width == 0 {
            return write!(f, "X");
        }
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|w| {
                if self.lo == 0 {
                    fmt_word(w)
                } else {
                    format!("@{}:{}", self.lo, fmt_word(w))
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}
