//! Nesting a bounded K-R tower inside a two-height tower: an auxiliary marker
//! whose occurrences lie in the base, blocks of sizes `s` and `s + 1` over its
//! columns, and every interior block edge moved to the nearest level of the
//! two-height base.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;

use super::kr::cuts;
use super::markers::{lex_first_matching, min_return, MatchAutomaton};
use super::tower::{marker_base, Column, TowerDescription, TowerKind};

/// Displacement of an edge sitting `o` levels above a base level, in a gap
/// of size `g`: down to the base level or up to the next one, ties down.
pub fn edge_shift(g: usize, o: usize) -> i64 {
    if o <= g - o {
        -(o as i64)
    } else {
        (g - o) as i64
    }
}

/// Every displacement an interior edge can undergo when base gaps take the
/// values in `gaps`.
pub fn edge_shifts(gaps: &[usize]) -> BTreeSet<i64> {
    gaps.iter().flat_map(|&g| (0..g).map(move |o| edge_shift(g, o))).collect()
}

/// Heights reachable by a block of size `s` or `s + 1` whose two edges are
/// displaced independently (an edge at a column boundary is not displaced).
pub fn reachable_heights(s: usize, shifts: &BTreeSet<i64>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for size in [s, s + 1] {
        for lo in shifts {
            for hi in shifts {
                out.insert((size as i64 + hi - lo) as usize);
            }
        }
    }
    out
}

/// Tower with base inside the base of `c` and heights in `[n, n + 4N]`.
pub fn nest_tower(x: &Subshift, c: &TowerDescription, n: usize) -> Result<TowerDescription> {
    if c.kind != TowerKind::TwoHeight || !c.exact {
        return Err(invalid("nesting needs an exact two-height K-R tower"));
    }
    let big_n = c.parameter;
    let h = c.max_height.unwrap_or(big_n + 1);
    if n < 2 * h {
        return Err(invalid(format!("n must be at least {} (twice the tower height)", 2 * h)));
    }
    let g = x.require_graph("tower nesting")?;
    let s = n + h - 1;
    let gap = 10 * s * s;
    let w = &c.markers[0];
    let mut pattern = vec![None; gap + 1 - w.len()];
    pattern.extend(w.iter().map(|&b| Some(b)));
    let mut aux = None;
    for extra in 0..=w.len() {
        let mut p = vec![None; extra];
        p.extend(pattern.iter().copied());
        let Some(cand) = lex_first_matching(g, &p) else {
            continue;
        };
        if min_return(x, std::slice::from_ref(&cand), gap)?.is_none() {
            aux = Some(cand);
            break;
        }
    }
    let aux = aux.ok_or_else(|| {
        Error::ResolutionTooCoarse(format!("no auxiliary marker ending in {w} with return time above {gap}"))
    })?;

    let gaps: Vec<usize> = c.columns.iter().map(|col| col.height).collect();
    let shifts = edge_shifts(&gaps);
    let heights = reachable_heights(s, &shifts);
    let (lo, hi) = (*heights.first().unwrap(), *heights.last().unwrap());
    if lo < n || hi > n + 4 * big_n {
        return Err(invalid(format!("nested heights [{lo}, {hi}] leave [{n}, {}]", n + 4 * big_n)));
    }
    let columns = heights
        .iter()
        .map(|&height| Column {
            height,
            base_piece: "block edges over the auxiliary marker columns".into(),
            mass: None,
            exact_mass: None,
        })
        .collect();
    let aux = Word(aux);
    Ok(TowerDescription {
        kind: TowerKind::Nested,
        marker_base: marker_base(x.ell(), std::slice::from_ref(&aux))?,
        markers: vec![aux.clone()],
        base_rule: format!(
            "edges of blocks of sizes {s} and {} over auxiliary marker columns, each interior edge moved to \
             the nearest level of the two-height base (ties downward)",
            s + 1
        ),
        columns,
        min_height: lo,
        max_height: Some(hi),
        resolution: aux.len(),
        exact: true,
        parameter: n,
        marker_gap: gap + 1,
        outer: Some(Box::new(c.clone())),
        aux_marker: Some(aux),
        block_size: Some(s),
    })
}

/// Edges of the nested tower along a finite word, computed directly from
/// marker occurrences (complete auxiliary columns only). Returns the base
/// positions of the two-height tower and of the nested tower.
pub fn simulate_nested(word: &[u8], t: &TowerDescription, ell: usize) -> (Vec<usize>, Vec<usize>) {
    let outer = t.outer.as_ref().expect("nested tower");
    let big_n = outer.parameter;
    let s = t.block_size.expect("nested tower");
    let w_ac = MatchAutomaton::new(ell, &[outer.markers[0].0.clone()]).unwrap();
    let a_ac = MatchAutomaton::new(ell, &[t.markers[0].0.clone()]).unwrap();
    let w_ends = w_ac.occurrence_ends(word);
    let mut c_levels = Vec::new();
    for p in w_ends.windows(2) {
        for cut in cuts(p[1] - p[0], big_n).unwrap_or_default() {
            c_levels.push(p[0] + cut);
        }
    }
    let c_set: BTreeSet<usize> = c_levels.iter().copied().collect();
    let a_ends = a_ac.occurrence_ends(word);
    let mut edges = Vec::new();
    for p in a_ends.windows(2) {
        edges.push(p[0]);
        for cut in cuts(p[1] - p[0], s).unwrap_or_default().into_iter().skip(1) {
            let e = p[0] + cut;
            let below = c_set.range(..=e).next_back().copied();
            let above = c_set.range(e..).next().copied();
            let moved = match (below, above) {
                (Some(b), Some(a)) => {
                    if e - b <= a - e {
                        b
                    } else {
                        a
                    }
                }
                (Some(b), None) => b,
                (None, Some(a)) => a,
                (None, None) => e,
            };
            edges.push(moved);
        }
    }
    if let Some(&last) = a_ends.last() {
        edges.push(last);
    }
    (c_levels, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entrolab::markov::MarkovMeasure;
    use crate::towers::kr::kr_two_heights;
    use rand::{Rng, SeedableRng};

    #[test]
    fn shifts_for_heights_three_and_four() {
        let sh = edge_shifts(&[3, 4]);
        assert_eq!(sh.iter().copied().collect::<Vec<_>>(), vec![-2, -1, 0, 1]);
        let hs = reachable_heights(43, &sh);
        assert_eq!(*hs.first().unwrap(), 40);
        assert_eq!(*hs.last().unwrap(), 47);
    }

    #[test]
    fn nested_full_shift_tower() {
        let x = Subshift::full(2).unwrap();
        let c = kr_two_heights(&x, &MarkovMeasure::uniform_bernoulli(2), 3, None).unwrap();
        let d = nest_tower(&x, &c, 40).unwrap();
        assert!(d.min_height >= 40 && d.max_height.unwrap() <= 52);
        let aux = d.aux_marker.as_ref().unwrap();
        assert!(aux.ends_with(&c.markers[0]));

        // plant auxiliary and two-height markers in random filler
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let w = &c.markers[0].0;
        let mut word = Vec::new();
        for _ in 0..4 {
            word.extend(&aux.0);
            for _ in 0..rng.random_range(150..400) {
                word.extend(w);
                let len = rng.random_range(0..60);
                word.extend((0..len).map(|i| if i % 9 == 0 { 1 } else { rng.random_range(0..2) }));
            }
        }
        word.extend(&aux.0);
        let (c_levels, edges) = simulate_nested(&word, &d, 2);
        let cs: BTreeSet<usize> = c_levels.into_iter().collect();
        assert!(edges.len() > 4);
        for e in &edges[..edges.len() - 1] {
            assert!(cs.contains(e), "edge {e} is not a two-height base level");
        }
        for p in edges.windows(2) {
            let hgt = p[1] - p[0];
            assert!((d.min_height..=d.max_height.unwrap()).contains(&hgt), "height {hgt}");
        }
    }

    #[test]
    fn rejects_non_kr_input() {
        let x = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let sky = crate::towers::tower::skyscraper(&x, &[Word::parse("01").unwrap()], &mu, 10).unwrap();
        assert!(matches!(nest_tower(&x, &sky, 40), Err(Error::InvalidArgument(_))));
    }
}
