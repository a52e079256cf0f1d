//! Entropy of two-set covers by complements of cylinders.

use serde::Serialize;

use crate::entrolab::cover_entropy::cover_entropy;
use crate::error::{invalid, Error, Result};
use crate::symcore::cover::CoverSpec;
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;
use crate::symcore::word::fmt_word;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpeCover {
    /// The cover is `{X ∖ [a], X ∖ [b]}`.
    pub a: String,
    pub b: String,
    /// `log r(n_max) - log r(n_max - 1)`.
    pub entropy: f64,
    /// `(1/n_max) log r(n_max)`.
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpeReport {
    pub resolution: usize,
    pub n_max: usize,
    pub covers: Vec<UpeCover>,
    pub min_entropy: f64,
    pub witness: Option<(String, String)>,
    /// Every cover at this resolution has positive entropy.
    pub positive: bool,
    pub tol: f64,
}

/// Minimum cover entropy over the covers `{X ∖ [a], X ∖ [b]}` with `a ≠ b`
/// admissible blocks of length `L`. The growth of the subcover counts between
/// `n_max - 1` and `n_max` is used as the entropy estimate.
pub fn upe_witness(x: &Subshift, l: usize, n_max: usize) -> Result<UpeReport> {
    if l == 0 || n_max < 2 {
        return Err(invalid("need L >= 1 and n_max >= 2"));
    }
    if let Some(g) = x.graph() {
        if !g.is_irreducible() {
            return Err(Error::Precondition("the subshift is not transitive".into()));
        }
    }
    let blocks = x.language(l)?;
    let pairs = (blocks.len() * blocks.len().saturating_sub(1) / 2) as u128;
    x.caps().check_states("cylinder pairs", pairs)?;
    let ell = x.ell();
    let caps = x.caps();
    let tol = 1e-9;
    let mut covers = Vec::new();
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            let ua = CylinderUnion::cylinder(ell, 0, a).complement(caps)?;
            let ub = CylinderUnion::cylinder(ell, 0, b).complement(caps)?;
            let u = CoverSpec::new(x, vec![ua, ub])?;
            let e = cover_entropy(x, &u, n_max)?;
            let r = |n: usize| (e.per_n[n - 1].r as f64).ln();
            covers.push(UpeCover {
                a: fmt_word(a),
                b: fmt_word(b),
                entropy: r(n_max) - r(n_max - 1),
                average: e.estimate,
            });
        }
    }
    let best = covers
        .iter()
        .min_by(|p, q| p.entropy.total_cmp(&q.entropy));
    let min_entropy = best.map_or(0.0, |c| c.entropy);
    let witness = best.map(|c| (c.a.clone(), c.b.clone()));
    Ok(UpeReport {
        resolution: l,
        n_max,
        positive: !covers.is_empty() && min_entropy > tol,
        covers,
        min_entropy,
        witness,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_shift_single_symbols() {
        let x = Subshift::full(2).unwrap();
        let r = upe_witness(&x, 1, 8).unwrap();
        assert_eq!(r.covers.len(), 1);
        assert!((r.min_entropy - 2f64.ln()).abs() < 1e-9, "{}", r.min_entropy);
        assert!(r.positive);
    }

    #[test]
    fn period_two_is_zero() {
        let r = upe_witness(&Subshift::period_two(), 2, 8).unwrap();
        assert!(r.min_entropy.abs() < 1e-9);
        assert!(!r.positive);
    }

    #[test]
    fn golden_mean_positive() {
        let r = upe_witness(&Subshift::golden_mean(), 2, 8).unwrap();
        assert_eq!(r.covers.len(), 3);
        assert!(r.positive, "{:?}", r.covers);
    }
}
