//! Transitivity and mixing of shifts of finite type, from the presentation
//! graph and from hitting-time sets of symbol cylinders on a window.

use num_integer::Integer;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::Result;
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::graph::VertexGraph;
use crate::symcore::pattern::contains_pattern;
use crate::symcore::subshift::Subshift;

use super::nset::n_set;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEvidence {
    pub u: u8,
    pub v: u8,
    /// `N([u], [v]) ∩ [1, H] ≠ ∅`.
    pub positive_hit: bool,
    /// Least `n0 ≥ 0` with `[n0, H] ⊆ N([u], [v])`.
    pub tail_start: Option<i64>,
    /// Longest run of `N([u], [v]) ∩ [0, H]`.
    pub thick_run: usize,
    /// Longest run of `N([u]×[v], [v]×[u]) ∩ [0, H] = N([u],[v]) ∩ N([v],[u]) ∩ [0, H]`.
    pub product_run: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReturnGap {
    pub u: u8,
    /// Largest gap of `N([u], [u]) ∩ [-H, H]`.
    pub syndetic_gap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SftClass {
    pub horizon: i64,
    pub vertices: usize,
    pub component_periods: Vec<usize>,
    pub transitive: bool,
    /// gcd of all cycle lengths.
    pub period: usize,
    pub mixing: bool,
    /// The product shift `X × X` is irreducible.
    pub weak_mixing: bool,
    pub pairs: Vec<PairEvidence>,
    pub return_gaps: Vec<ReturnGap>,
    /// Every pair has a positive hitting time within the window.
    pub window_transitive: bool,
    /// Every pair has `tail_start ≤ H/2`.
    pub window_mixing: bool,
    /// Every pair has a product run of length at least `H/2`.
    pub window_weak_mixing: bool,
    pub agrees: bool,
}

fn product_irreducible(g: &VertexGraph, caps: &Caps) -> Result<bool> {
    let n = g.len();
    caps.check_states("product graph", (n * n) as u128)?;
    let id = |a: usize, b: usize| a * n + b;
    let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut bwd: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for a in 0..n {
        for b in 0..n {
            for &(_, a2) in g.successors(a) {
                for &(_, b2) in g.successors(b) {
                    fwd[id(a, b)].push(id(a2, b2));
                    bwd[id(a2, b2)].push(id(a, b));
                }
            }
        }
    }
    let covers = |adj: &[Vec<usize>]| {
        let mut seen = vec![false; n * n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    Ok(covers(&fwd) && covers(&bwd))
}

/// Graph-theoretic flags cross-checked against `N(U, V)` for every pair of
/// symbol cylinders on `[-H, H]`.
pub fn classify_sft(x: &Subshift, h: i64) -> Result<SftClass> {
    let g = x.require_graph("mixing classification")?;
    let comps = g.nontrivial_sccs();
    let component_periods: Vec<usize> = comps.iter().map(|c| g.period_of(c)).collect();
    let transitive = g.is_irreducible();
    let period = component_periods.iter().fold(0usize, |a, &p| a.gcd(&p));
    let mixing = transitive && period == 1;
    let weak_mixing = product_irreducible(g, x.caps())?;

    let ell = x.ell();
    let mut symbols = Vec::new();
    for a in 0..ell as u8 {
        let c = CylinderUnion::cylinder(ell, 0, &[a]);
        if contains_pattern(x, &[(0, &c)])? {
            symbols.push((a, c));
        }
    }
    let mut sets = Vec::new();
    for (a, ca) in &symbols {
        let mut row = Vec::new();
        for (_, cb) in &symbols {
            row.push(n_set(x, ca, cb, h)?);
        }
        sets.push((*a, row));
    }
    let mut pairs = Vec::new();
    for (i, (a, row)) in sets.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let pos = s.restrict(0, h);
            let back = sets[j].1[i].restrict(0, h);
            pairs.push(PairEvidence {
                u: *a,
                v: symbols[j].0,
                positive_hit: pos.members().iter().any(|&n| n > 0),
                tail_start: pos.tail_start(),
                thick_run: pos.longest_run(),
                product_run: pos.intersection(&back).longest_run(),
            });
        }
    }
    let return_gaps = sets
        .iter()
        .enumerate()
        .map(|(i, (a, row))| ReturnGap { u: *a, syndetic_gap: row[i].max_gap() })
        .collect();
    let half = h / 2;
    let window_transitive = pairs.iter().all(|p| p.positive_hit);
    let window_mixing = pairs.iter().all(|p| p.tail_start.is_some_and(|t| t <= half));
    let window_weak_mixing = pairs.iter().all(|p| p.product_run as i64 >= half);
    let agrees = window_mixing == mixing && window_weak_mixing == weak_mixing && window_transitive == transitive;
    Ok(SftClass {
        horizon: h,
        vertices: g.len(),
        component_periods,
        transitive,
        period,
        mixing,
        weak_mixing,
        pairs,
        return_gaps,
        window_transitive,
        window_mixing,
        window_weak_mixing,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_shift() {
        let c = classify_sft(&Subshift::full(2).unwrap(), 16).unwrap();
        assert!(c.transitive && c.mixing && c.weak_mixing);
        assert_eq!(c.period, 1);
        assert!(c.agrees);
    }

    #[test]
    fn period_two() {
        let c = classify_sft(&Subshift::period_two(), 16).unwrap();
        assert!(c.transitive && !c.mixing && !c.weak_mixing);
        assert_eq!(c.period, 2);
        let p = c.pairs.iter().find(|p| p.u == 0 && p.v == 1).unwrap();
        assert_eq!(p.thick_run, 1);
        assert!(c.return_gaps.iter().all(|g| g.syndetic_gap == Some(2)));
        assert!(c.agrees);
    }

    #[test]
    fn golden_mean() {
        let c = classify_sft(&Subshift::golden_mean(), 16).unwrap();
        assert!(c.transitive && c.mixing && c.weak_mixing);
        assert!(c.agrees);
    }

    #[test]
    fn reducible() {
        // {0,1} and {2,3} never meet
        let x = Subshift::sft_str(4, &["02", "03", "12", "13", "20", "21", "30", "31"]).unwrap();
        let c = classify_sft(&x, 16).unwrap();
        assert!(!c.transitive && !c.mixing && !c.weak_mixing);
        assert_eq!(c.component_periods.len(), 2);
        assert!(c.agrees);
    }

    #[test]
    fn substitution_rejected() {
        assert!(classify_sft(&Subshift::morse(), 8).is_err());
    }
}
