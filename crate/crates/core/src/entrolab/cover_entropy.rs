//! Topological entropy of finite cylinder covers through exact minimal
//! subcovers of the refined covers `U ∨ T^{-1}U ∨ … ∨ T^{-(n-1)}U`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symcore::cover::CoverSpec;
use crate::symcore::subshift::Subshift;

use super::setcover::min_set_cover;

/// How `r(U_0^{n-1})` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubcoverMethod {
    /// `U` contains `X`, so `r = 1`.
    Trivial,
    /// `U` separates admissible blocks of its window; `r` is a word count.
    BlockCount,
    /// `U` is a partition; `r` counts distinct names.
    DistinctNames,
    /// General cover; exact branch-and-bound set cover.
    SetCover,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcoverRow {
    pub n: usize,
    pub r: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverEntropy {
    pub resolution: usize,
    pub n_max: usize,
    pub method: SubcoverMethod,
    pub per_n: Vec<SubcoverRow>,
    pub estimate: f64,
    pub upper_bound: f64,
}

fn method_for(x: &Subshift, u: &CoverSpec) -> Result<SubcoverMethod> {
    if u.elements().iter().any(|e| e.is_whole()) || u.resolution() == 0 {
        return Ok(SubcoverMethod::Trivial);
    }
    let (lo, w) = u.window();
    if u.as_partition(x)?.is_none() {
        return Ok(SubcoverMethod::SetCover);
    }
    let lang = x.language_arc(w)?;
    let mut seen = HashSet::new();
    for b in lang.iter() {
        let c = u.containing(b, lo)[0];
        if !seen.insert(c) {
            return Ok(SubcoverMethod::DistinctNames);
        }
    }
    Ok(SubcoverMethod::BlockCount)
}

/// Membership masks `masks[j][i]`: the blocks of length `w + n - 1` whose
/// window at offset `j` lies in element `i`.
fn element_masks(u: &CoverSpec, blocks: &[crate::symcore::word::Word], n: usize) -> Vec<Vec<FixedBitSet>> {
    let (lo, w) = u.window();
    let mut masks = vec![vec![FixedBitSet::with_capacity(blocks.len()); u.len()]; n];
    for (bi, b) in blocks.iter().enumerate() {
        for (j, row) in masks.iter_mut().enumerate() {
            for i in u.containing(&b[j..j + w], lo) {
                row[i].insert(bi);
            }
        }
    }
    masks
}

/// Nonempty elements of the refined cover as block sets, skipping branches
/// dominated at some coordinate.
fn refined_elements(masks: &[Vec<FixedBitSet>], universe: usize, node_cap: u64) -> Result<Vec<FixedBitSet>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut nodes = 0u64;
    let mut all = FixedBitSet::with_capacity(universe);
    all.insert_range(..);
    let mut stack = vec![(0usize, all)];
    while let Some((j, cur)) = stack.pop() {
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::cap("refined cover enumeration nodes", node_cap as u128, nodes as u128));
        }
        if j == masks.len() {
            if seen.insert(cur.clone()) {
                out.push(cur);
            }
            continue;
        }
        let cands: Vec<FixedBitSet> = masks[j]
            .iter()
            .map(|m| {
                let mut c = cur.clone();
                c.intersect_with(m);
                c
            })
            .collect();
        let mut keep = Vec::new();
        for (a, ca) in cands.iter().enumerate() {
            if ca.is_clear() {
                continue;
            }
            let dominated = cands.iter().enumerate().any(|(b, cb)| {
                b != a && ca.is_subset(cb) && (ca != cb || b < a)
            });
            if !dominated {
                keep.push(ca.clone());
            }
        }
        for c in keep.into_iter().rev() {
            stack.push((j + 1, c));
        }
    }
    Ok(out)
}

/// `r(U_0^{n-1})`: the least cardinality of a subcover of the refined cover
/// restricted to `x`.
pub fn min_subcover_count(x: &Subshift, u: &CoverSpec, n: usize) -> Result<u64> {
    subcover_count_with(x, u, n, method_for(x, u)?)
}

fn subcover_count_with(x: &Subshift, u: &CoverSpec, n: usize, method: SubcoverMethod) -> Result<u64> {
    if n == 0 {
        return Err(crate::error::invalid("n must be at least 1"));
    }
    let (lo, w) = u.window();
    let len = w + n - 1;
    match method {
        SubcoverMethod::Trivial => Ok(1),
        SubcoverMethod::BlockCount => {
            let c = x.count_words(len)?;
            x.caps().check_states("refined cover size", c)?;
            Ok(c as u64)
        }
        SubcoverMethod::DistinctNames => {
            let blocks = x.language_arc(len)?;
            let names: HashSet<Vec<usize>> = blocks
                .iter()
                .map(|b| (0..n).map(|j| u.containing(&b[j..j + w], lo)[0]).collect())
                .collect();
            Ok(names.len() as u64)
        }
        SubcoverMethod::SetCover => {
            let blocks = x.language_arc(len)?;
            let masks = element_masks(u, &blocks, n);
            let sets = refined_elements(&masks, blocks.len(), x.caps().search_nodes)?;
            let sol = min_set_cover(blocks.len(), &sets, x.caps().search_nodes)?;
            Ok(sol.size as u64)
        }
    }
}

/// Per-`n` values `(1/n) log r(U_0^{n-1})` for `1 ≤ n ≤ n_max`. The estimate
/// is the value at `n_max`; the upper bound is the minimum over `n`, valid by
/// subadditivity.
pub fn cover_entropy(x: &Subshift, u: &CoverSpec, n_max: usize) -> Result<CoverEntropy> {
    if n_max == 0 {
        return Err(crate::error::invalid("n_max must be at least 1"));
    }
    let method = method_for(x, u)?;
    let mut per_n = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = subcover_count_with(x, u, n, method)?;
        per_n.push(SubcoverRow {
            n,
            r,
            value: (r as f64).ln() / n as f64,
        });
    }
    let estimate = per_n.last().unwrap().value;
    let upper_bound = per_n.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    Ok(CoverEntropy {
        resolution: u.resolution(),
        n_max,
        method,
        per_n,
        estimate,
        upper_bound,
    })
}
