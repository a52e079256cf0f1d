use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Result};
use crate::exact::Rational;
use crate::symcore::word::{next_word, Word};

/// Arithmetic slack used when comparing float entropies.
pub const ENTROPY_TOL: f64 = 1e-9;

/// `φ(t) = -t log t` with `φ(0) = 0` (natural log).
pub fn phi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

pub fn nats_to_bits(h: f64) -> f64 {
    h / std::f64::consts::LN_2
}

/// Empirical distribution of the `k`-blocks of a word over its `n - k + 1`
/// windows, kept as exact counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDistribution {
    pub k: usize,
    pub windows: u64,
    pub counts: BTreeMap<Word, u64>,
}

impl BlockDistribution {
    pub fn frequency(&self, w: &[u8]) -> Rational {
        let c = self.counts.get(&Word::from(w)).copied().unwrap_or(0);
        Rational::new(BigInt::from(c), BigInt::from(self.windows))
    }

    pub fn frequencies(&self) -> Vec<(Word, Rational)> {
        self.counts
            .iter()
            .map(|(w, &c)| (w.clone(), Rational::new(BigInt::from(c), BigInt::from(self.windows))))
            .collect()
    }

    pub fn frequency_f64(&self, w: &[u8]) -> f64 {
        self.counts.get(&Word::from(w)).copied().unwrap_or(0) as f64 / self.windows as f64
    }

    /// `Σ_θ φ(p(θ|ω))`.
    pub fn entropy(&self) -> f64 {
        let t = self.windows as f64;
        self.counts.values().map(|&c| phi(c as f64 / t)).sum()
    }

    pub fn total(&self) -> Rational {
        self.frequencies().into_iter().map(|(_, f)| f).sum()
    }

    /// Marginal on the first (`left = true`) or last `k - 1` symbols.
    pub fn marginal(&self, left: bool) -> BTreeMap<Word, u64> {
        let mut out = BTreeMap::new();
        for (w, &c) in &self.counts {
            let key = if left { &w[..w.len() - 1] } else { &w[1..] };
            *out.entry(Word::from(key)).or_insert(0) += c;
        }
        out
    }
}

/// `p(θ|ω)` for all `k`-blocks `θ` of `ω`.
pub fn block_frequencies(w: &[u8], k: usize) -> Result<BlockDistribution> {
    if k == 0 || k > w.len() {
        return Err(invalid(format!("block length {k} must lie in 1..={}", w.len())));
    }
    let mut counts = BTreeMap::new();
    for win in w.windows(k) {
        *counts.entry(Word::from(win)).or_insert(0u64) += 1;
    }
    Ok(BlockDistribution {
        k,
        windows: (w.len() - k + 1) as u64,
        counts,
    })
}

/// `H_k(ω)` in nats. The value is checked against `[0, k log ℓ]`, with `ℓ`
/// the smallest alphabet (at least 2) containing the word's symbols.
pub fn block_entropy(w: &[u8], k: usize) -> Result<f64> {
    let h = block_frequencies(w, k)?.entropy();
    let ell = (w.iter().copied().max().unwrap_or(0) as usize + 1).max(2);
    assert!(
        h >= -ENTROPY_TOL && h <= k as f64 * (ell as f64).ln() + ENTROPY_TOL,
        "block entropy {h} outside [0, k log ell]"
    );
    Ok(h.max(0.0))
}

/// Fast `H_k` over a word given as integer symbols, using a dense scratch table.
pub(crate) fn block_entropy_dense(w: &[u8], k: usize, ell: usize, scratch: &mut Vec<u32>) -> f64 {
    let size = ell.pow(k as u32);
    if scratch.len() < size {
        scratch.resize(size, 0);
    }
    let windows = w.len() - k + 1;
    let top = ell.pow(k as u32 - 1);
    let mut code = 0usize;
    for &s in &w[..k - 1] {
        code = code * ell + s as usize;
    }
    let mut touched = Vec::with_capacity(windows);
    for i in (k - 1)..w.len() {
        code = code * ell + w[i] as usize;
        if scratch[code] == 0 {
            touched.push(code);
        }
        scratch[code] += 1;
        code %= top;
    }
    let t = windows as f64;
    let mut h = 0.0;
    for c in touched {
        h += phi(scratch[c] as f64 / t);
        scratch[c] = 0;
    }
    h
}

/// `card{ω ∈ 𝔏^n : H_k(ω) ≤ k h}` by exhaustive enumeration.
pub fn count_low_entropy_words(ell: usize, n: usize, k: usize, h: f64, caps: &Caps) -> Result<u64> {
    if ell < 2 {
        return Err(invalid("alphabet size must be >= 2"));
    }
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if h < 0.0 {
        return Err(invalid("h must be >= 0"));
    }
    let total = (ell as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    caps.check_states("words enumerated by the counting lemma", total)?;
    let limit = k as f64 * h + ENTROPY_TOL;
    let mut w = vec![0u8; n];
    let mut scratch = Vec::new();
    let mut count = 0u64;
    loop {
        if block_entropy_dense(&w, k, ell, &mut scratch) <= limit {
            count += 1;
        }
        if !next_word(&mut w, ell) {
            break;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub n: usize,
    pub count: u64,
    /// `exp(n (h + ε))`.
    pub bound: f64,
    pub holds: bool,
    /// `exp(n (h - ε))`, the reverse inequality, reported only.
    pub reverse_bound: f64,
    pub reverse_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub ell: usize,
    pub k: usize,
    pub h: f64,
    pub eps: f64,
    pub rows: Vec<LemmaRow>,
    /// Smallest `n` in range from which the upper bound holds through the end
    /// of the range.
    pub threshold: Option<usize>,
}

/// Counting-lemma table over `n_lo..=n_hi`.
pub fn lemma_table(
    ell: usize,
    n_lo: usize,
    n_hi: usize,
    k: usize,
    h: f64,
    eps: f64,
    caps: &Caps,
) -> Result<LemmaReport> {
    if n_lo < k || n_lo > n_hi {
        return Err(invalid(format!("bad range {n_lo}..={n_hi} for k = {k}")));
    }
    if eps <= 0.0 {
        return Err(invalid("epsilon must be positive"));
    }
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let count = count_low_entropy_words(ell, n, k, h, caps)?;
        let up = n as f64 * (h + eps);
        let down = n as f64 * (h - eps);
        let lc = if count == 0 { f64::NEG_INFINITY } else { (count as f64).ln() };
        rows.push(LemmaRow {
            n,
            count,
            bound: up.exp(),
            holds: lc <= up + 1e-12,
            reverse_bound: down.exp(),
            reverse_holds: lc >= down - 1e-12,
        });
    }
    let mut threshold = None;
    for r in rows.iter().rev() {
        if r.holds {
            threshold = Some(r.n);
        } else {
            break;
        }
    }
    Ok(LemmaReport {
        ell,
        k,
        h,
        eps,
        rows,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn frequencies() {
        let d = block_frequencies(&w("0000"), 2).unwrap();
        assert_eq!(d.frequency(&[0, 0]), rat(1, 1));
        let d = block_frequencies(&w("0101"), 1).unwrap();
        assert_eq!(d.frequency(&[0]), rat(1, 2));
        let d = block_frequencies(&w("0010"), 2).unwrap();
        for b in [[0, 0], [0, 1], [1, 0]] {
            assert_eq!(d.frequency(&b), rat(1, 3));
        }
        assert_eq!(d.total(), rat(1, 1));
        assert!(block_frequencies(&w("01"), 3).is_err());
    }

    #[test]
    fn entropies() {
        assert_eq!(block_entropy(&w("0000"), 1).unwrap(), 0.0);
        assert!((block_entropy(&w("0101"), 1).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((block_entropy(&w("0010"), 2).unwrap() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dense_matches_map() {
        let word = w("0110100110010110");
        let mut scratch = Vec::new();
        for k in 1..5 {
            let a = block_entropy(&word, k).unwrap();
            let b = block_entropy_dense(&word, k, 2, &mut scratch);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lemma_counts() {
        let caps = Caps::default();
        assert_eq!(count_low_entropy_words(2, 3, 1, 0.0, &caps).unwrap(), 2);
        assert_eq!(count_low_entropy_words(2, 2, 1, 2f64.ln(), &caps).unwrap(), 4);
        let c = count_low_entropy_words(2, 12, 2, 0.3, &caps).unwrap();
        assert!((c as f64) <= (12.0 * 0.5f64).exp());
    }

    #[test]
    fn lemma_at_log_ell_counts_everything() {
        let r = lemma_table(2, 4, 10, 1, 2f64.ln(), 0.1, &Caps::default()).unwrap();
        assert!(r.rows.iter().all(|row| row.count == 1 << row.n && row.holds));
        assert_eq!(r.threshold, Some(4));
    }
}
