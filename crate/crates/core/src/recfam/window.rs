//! Sets of integers known on a finite window, and window-relative evidence
//! for the syndetic, thick and IP families.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    NSet,
    DifferenceSet,
    Bohr,
    IpGenerated,
    Sip,
}

/// Membership of every integer in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerWindowSet {
    pub lo: i64,
    pub hi: i64,
    bits: Vec<bool>,
    pub provenance: Provenance,
}

impl Serialize for IntegerWindowSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IntegerWindowSet", 4)?;
        st.serialize_field("lo", &self.lo)?;
        st.serialize_field("hi", &self.hi)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("members", &self.members())?;
        st.end()
    }
}

impl IntegerWindowSet {
    pub fn empty(lo: i64, hi: i64, provenance: Provenance) -> Self {
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        IntegerWindowSet {
            lo,
            hi,
            bits: vec![false; len],
            provenance,
        }
    }

    pub fn from_fn(lo: i64, hi: i64, provenance: Provenance, mut f: impl FnMut(i64) -> Result<bool>) -> Result<Self> {
        let mut s = Self::empty(lo, hi, provenance);
        for n in lo..=hi {
            s.bits[(n - lo) as usize] = f(n)?;
        }
        Ok(s)
    }

    /// Explicit set on `[lo, hi]`; members outside the window are an error.
    pub fn explicit(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut s = Self::empty(lo, hi, Provenance::Explicit);
        for n in members {
            if n < lo || n > hi {
                return Err(invalid(format!("{n} lies outside [{lo}, {hi}]")));
            }
            s.insert(n);
        }
        Ok(s)
    }

    pub(crate) fn insert(&mut self, n: i64) {
        self.bits[(n - self.lo) as usize] = true;
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi && self.bits[(n - self.lo) as usize]
    }

    pub fn members(&self) -> Vec<i64> {
        (self.lo..=self.hi).filter(|&n| self.contains(n)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest gap between consecutive members.
    pub fn max_gap(&self) -> Option<i64> {
        self.members().windows(2).map(|p| p[1] - p[0]).max()
    }

    /// Longest run of consecutive members.
    pub fn longest_run(&self) -> usize {
        let (mut run, mut best) = (0usize, 0usize);
        for &b in &self.bits {
            run = if b { run + 1 } else { 0 };
            best = best.max(run);
        }
        best
    }

    /// Least `n0` with `[n0, hi] ⊆ S`.
    pub fn tail_start(&self) -> Option<i64> {
        let mut n0 = None;
        for n in (self.lo..=self.hi).rev() {
            if !self.contains(n) {
                break;
            }
            n0 = Some(n);
        }
        n0
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self::empty(self.lo.max(other.lo), self.hi.min(other.hi), self.provenance);
        for n in out.lo..=out.hi {
            if self.contains(n) && other.contains(n) {
                out.insert(n);
            }
        }
        out
    }

    /// `{-n : n ∈ S}`.
    pub fn negated(&self) -> Self {
        let mut out = Self::empty(-self.hi, -self.lo, self.provenance);
        for n in self.members() {
            out.insert(-n);
        }
        out
    }

    /// `S ∩ [lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let (lo, hi) = (lo.max(self.lo), hi.min(self.hi));
        let mut out = Self::empty(lo, hi, self.provenance);
        for n in lo..=hi {
            if self.contains(n) {
                out.insert(n);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowClass {
    pub lo: i64,
    pub hi: i64,
    /// Largest gap between consecutive members; `None` with fewer than two.
    pub syndetic_gap: Option<i64>,
    /// Longest run of consecutive members.
    pub thick_run: usize,
    /// Largest `d` with generators `0 < n_1 < … < n_d` whose finite sums all
    /// lie in the set.
    pub ip_depth: usize,
    pub ip_generators: Vec<i64>,
    /// The IP search finished within its node budget.
    pub ip_exhaustive: bool,
}

fn ip_search(s: &IntegerWindowSet, node_cap: u64) -> (Vec<i64>, bool) {
    let pos: Vec<i64> = s.members().into_iter().filter(|&n| n > 0).collect();
    let mut best: Vec<i64> = Vec::new();
    let mut nodes = 0u64;
    // stack of (generators, sums)
    fn go(
        s: &IntegerWindowSet,
        pos: &[i64],
        gens: &mut Vec<i64>,
        sums: &BTreeSet<i64>,
        best: &mut Vec<i64>,
        nodes: &mut u64,
        cap: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > cap {
            return false;
        }
        if gens.len() > best.len() {
            *best = gens.clone();
        }
        let start = gens.last().copied().unwrap_or(0);
        let total: i64 = gens.iter().sum();
        for &n in pos.iter().filter(|&&n| n > start) {
            // every later generator is larger, so the full sum bounds the depth
            if total + n > s.hi {
                break;
            }
            if !s.contains(n) || !sums.iter().all(|&t| s.contains(t + n)) {
                continue;
            }
            let mut next = sums.clone();
            next.insert(n);
            for &t in sums {
                next.insert(t + n);
            }
            gens.push(n);
            let ok = go(s, pos, gens, &next, best, nodes, cap);
            gens.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let done = go(s, &pos, &mut Vec::new(), &BTreeSet::new(), &mut best, &mut nodes, node_cap);
    (best, done)
}

/// Window-relative gap, run and IP evidence.
pub fn classify_window(s: &IntegerWindowSet, node_cap: u64) -> WindowClass {
    let (gens, done) = ip_search(s, node_cap);
    WindowClass {
        lo: s.lo,
        hi: s.hi,
        syndetic_gap: s.max_gap(),
        thick_run: s.longest_run(),
        ip_depth: gens.len(),
        ip_generators: gens,
        ip_exhaustive: done,
    }
}

/// True when `s` meets every run of `len` consecutive integers of the window
/// that lies between its first and last member.
pub fn meets_every_run(s: &IntegerWindowSet, len: usize) -> bool {
    let m = s.members();
    let (Some(&first), Some(&last)) = (m.first(), m.last()) else {
        return false;
    };
    let len = len as i64;
    (first..=last - len + 1).all(|a| (a..a + len).any(|n| s.contains(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evens() {
        let s = IntegerWindowSet::from_fn(-100, 100, Provenance::Explicit, |n| Ok(n % 2 == 0)).unwrap();
        let c = classify_window(&s, 1_000_000);
        assert_eq!(c.syndetic_gap, Some(2));
        assert_eq!(c.thick_run, 1);
        assert!(c.ip_depth >= 3);
    }

    #[test]
    fn whole_window() {
        let h = 20;
        let s = IntegerWindowSet::from_fn(-h, h, Provenance::Explicit, |_| Ok(true)).unwrap();
        let c = classify_window(&s, 1_000_000);
        assert_eq!(c.syndetic_gap, Some(1));
        assert_eq!(c.thick_run, (2 * h + 1) as usize);
    }

    #[test]
    fn squares() {
        let s = IntegerWindowSet::explicit(0, 100, (1..=10).map(|n| n * n)).unwrap();
        let c = classify_window(&s, 1_000_000);
        assert_eq!(c.thick_run, 1);
        assert_eq!(c.syndetic_gap, Some(19));
        let m = s.members();
        let gaps: Vec<i64> = m.windows(2).map(|p| p[1] - p[0]).collect();
        assert!(gaps.windows(2).all(|g| g[1] > g[0]));
    }

    #[test]
    fn negation_round_trip() {
        let s = IntegerWindowSet::explicit(-3, 7, [-2, 0, 5]).unwrap();
        assert_eq!(s.negated().members(), vec![-5, 0, 2]);
        assert_eq!(s.negated().negated(), s);
    }
}
