//! Empirical measures of finite orbit segments.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::entrolab::blocks::phi;
use crate::error::{invalid, Result};
use crate::exact::{rat, Rational};
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;

/// Order-`k` block distribution of `(1/N) Σ_{i<N} δ_{T^i x}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub k: usize,
    pub counts: BTreeMap<Word, u64>,
    /// Total-variation distance between the two `(k-1)`-block marginals.
    pub defect: f64,
    /// `2k / N`.
    pub defect_bound: f64,
}

impl EmpiricalMeasure {
    pub fn frequency(&self, w: &[u8]) -> Rational {
        rat(self.counts.get(&Word::from(w)).copied().unwrap_or(0) as i64, self.n as i64)
    }

    pub fn frequency_f64(&self, w: &[u8]) -> f64 {
        self.counts.get(&Word::from(w)).copied().unwrap_or(0) as f64 / self.n as f64
    }

    /// `(1/k) Σ_θ φ(μ([θ]))`.
    pub fn entropy_rate(&self) -> f64 {
        let t = self.n as f64;
        self.counts.values().map(|&c| phi(c as f64 / t)).sum::<f64>() / self.k as f64
    }
}

/// Blocks `x[i..i+k]` for `i < N`; needs `|x| ≥ N + k - 1`.
pub fn empirical_measure(x: &Subshift, point: &[u8], n: usize, k: usize) -> Result<EmpiricalMeasure> {
    if n == 0 || k == 0 {
        return Err(invalid("N and k must be positive"));
    }
    if point.len() < n + k - 1 {
        return Err(invalid(format!("point has length {} but N + k - 1 = {}", point.len(), n + k - 1)));
    }
    if !x.is_admissible(point)? {
        return Err(invalid("point word is not admissible"));
    }
    let mut counts = BTreeMap::new();
    for i in 0..n {
        *counts.entry(Word::from(&point[i..i + k])).or_insert(0u64) += 1;
    }
    let mut left: BTreeMap<&[u8], i64> = BTreeMap::new();
    for (w, &c) in &counts {
        *left.entry(&w[..k - 1]).or_insert(0) += c as i64;
        *left.entry(&w[1..]).or_insert(0) -= c as i64;
    }
    let defect = left.values().map(|d| d.unsigned_abs()).sum::<u64>() as f64 / (2 * n) as f64;
    let defect_bound = 2.0 * k as f64 / n as f64;
    assert!(defect <= defect_bound + 1e-12, "shift-consistency defect {defect} above 2k/N");
    Ok(EmpiricalMeasure { n, k, counts, defect, defect_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::subshift::Seed;

    #[test]
    fn periodic_point() {
        let x = Subshift::full(2).unwrap();
        let w: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        let m = empirical_measure(&x, &w, 99, 1).unwrap();
        assert_eq!(m.defect, 0.0);
        let m = empirical_measure(&x, &w, 98, 1).unwrap();
        assert_eq!(m.frequency(&[0]), rat(1, 2));
        assert_eq!(m.defect, 0.0);
    }

    #[test]
    fn constant_point() {
        let x = Subshift::full(2).unwrap();
        let m = empirical_measure(&x, &[0; 100], 99, 2).unwrap();
        assert_eq!(m.frequency(&[0, 0]), rat(1, 1));
        assert_eq!(m.defect, 0.0);
    }

    #[test]
    fn morse_two_blocks() {
        let x = Subshift::morse();
        let w = x.orbit_segment(&Seed::FixedPoint(0), 256).unwrap();
        let m = empirical_measure(&x, &w, 255, 2).unwrap();
        let tol = 2.0 * 2.0 / 255.0;
        for (b, f) in [([0, 0], 1.0 / 6.0), ([0, 1], 1.0 / 3.0), ([1, 0], 1.0 / 3.0), ([1, 1], 1.0 / 6.0)] {
            assert!((m.frequency_f64(&b) - f).abs() <= tol, "{b:?}");
        }
    }
}
