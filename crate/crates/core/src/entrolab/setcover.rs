//! Exact minimum set cover by branch and bound.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// An optimal cover: `chosen` indexes the input sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverSolution {
    pub size: usize,
    pub chosen: Vec<usize>,
    pub nodes: u64,
    pub greedy: usize,
}

struct Search<'a> {
    sets: &'a [FixedBitSet],
    elem_sets: Vec<Vec<usize>>,
    elem_bits: Vec<FixedBitSet>,
    best: Vec<usize>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn lower_bound(&self, unc: &FixedBitSet) -> usize {
        let total = unc.count_ones(..);
        if total == 0 {
            return 0;
        }
        let widest = self
            .sets
            .iter()
            .map(|s| s.intersection_count(unc))
            .max()
            .unwrap_or(0)
            .max(1);
        let by_size = total.div_ceil(widest);
        let mut order: Vec<usize> = unc.ones().collect();
        order.sort_by_key(|&e| (self.elem_sets[e].len(), e));
        let mut used = FixedBitSet::with_capacity(self.sets.len());
        let mut packed = 0;
        for e in order {
            if used.is_disjoint(&self.elem_bits[e]) {
                packed += 1;
                used.union_with(&self.elem_bits[e]);
            }
        }
        by_size.max(packed)
    }

    fn run(&mut self, unc: &FixedBitSet, chosen: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::cap("set-cover search nodes", self.cap as u128, self.nodes as u128));
        }
        if unc.is_clear() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.lower_bound(unc) >= self.best.len() {
            return Ok(());
        }
        let e = unc
            .ones()
            .min_by_key(|&e| (self.elem_sets[e].len(), e))
            .expect("nonempty");
        let mut branches: Vec<(usize, usize)> = self.elem_sets[e]
            .iter()
            .map(|&s| (self.sets[s].intersection_count(unc), s))
            .collect();
        branches.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, s) in branches {
            let mut next = unc.clone();
            next.difference_with(&self.sets[s]);
            chosen.push(s);
            self.run(&next, chosen)?;
            chosen.pop();
            if chosen.len() + 1 >= self.best.len() {
                break;
            }
        }
        Ok(())
    }
}

fn greedy(sets: &[FixedBitSet], unc: &FixedBitSet) -> Vec<usize> {
    let mut unc = unc.clone();
    let mut out = Vec::new();
    while !unc.is_clear() {
        let (best, _) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.intersection_count(&unc)))
            .fold((usize::MAX, 0), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc });
        out.push(best);
        unc.difference_with(&sets[best]);
    }
    out
}

/// Smallest number of `sets` whose union is `{0, .., universe - 1}`.
///
/// Sets are deduplicated and dominated sets dropped before the search; ties
/// are broken towards lower input indices so the result is deterministic.
pub fn min_set_cover(universe: usize, sets: &[FixedBitSet], node_cap: u64) -> Result<SetCoverSolution> {
    let mut all = FixedBitSet::with_capacity(universe);
    for s in sets {
        all.union_with(s);
    }
    if all.count_ones(..) < universe {
        return Err(Error::InvalidCover("the sets do not cover the universe".into()));
    }
    if universe == 0 {
        return Ok(SetCoverSolution {
            size: 0,
            chosen: Vec::new(),
            nodes: 0,
            greedy: 0,
        });
    }
    // drop duplicates and dominated sets, largest first
    let mut order: Vec<usize> = (0..sets.len()).filter(|&i| !sets[i].is_clear()).collect();
    order.sort_by(|&a, &b| sets[b].count_ones(..).cmp(&sets[a].count_ones(..)).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&k| sets[i].is_subset(&sets[k])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    let reduced: Vec<FixedBitSet> = kept.iter().map(|&i| sets[i].clone()).collect();

    let mut elem_sets = vec![Vec::new(); universe];
    for (j, s) in reduced.iter().enumerate() {
        for e in s.ones() {
            elem_sets[e].push(j);
        }
    }
    let elem_bits = elem_sets
        .iter()
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(reduced.len());
            v.iter().for_each(|&j| b.insert(j));
            b
        })
        .collect();

    // sets forced by elements with a single cover
    let mut unc = FixedBitSet::with_capacity(universe);
    unc.insert_range(..);
    let mut forced: Vec<usize> = Vec::new();
    for e in 0..universe {
        if elem_sets[e].len() == 1 && !forced.contains(&elem_sets[e][0]) {
            forced.push(elem_sets[e][0]);
        }
    }
    forced.sort_unstable();
    for &j in &forced {
        unc.difference_with(&reduced[j]);
    }

    let g = greedy(&reduced, &unc);
    let greedy_size = forced.len() + g.len();
    let mut search = Search {
        sets: &reduced,
        elem_sets,
        elem_bits,
        best: g,
        nodes: 0,
        cap: node_cap,
    };
    // the incumbent is strict: look for something smaller than greedy
    let mut chosen = Vec::new();
    search.run(&unc, &mut chosen)?;
    let mut picked: Vec<usize> = forced.iter().chain(search.best.iter()).map(|&j| kept[j]).collect();
    picked.sort_unstable();
    Ok(SetCoverSolution {
        size: picked.len(),
        chosen: picked,
        nodes: search.nodes,
        greedy: greedy_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(universe: usize, elems: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(universe);
        elems.iter().for_each(|&e| b.insert(e));
        b
    }

    fn brute(universe: usize, sets: &[FixedBitSet]) -> usize {
        (0u32..1 << sets.len())
            .filter(|mask| {
                let mut u = FixedBitSet::with_capacity(universe);
                for (i, s) in sets.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        u.union_with(s);
                    }
                }
                u.count_ones(..) == universe
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn greedy_is_not_optimal_here() {
        // classic instance: greedy takes the big middle set first
        let u = 6;
        let sets = vec![bits(u, &[0, 1, 2]), bits(u, &[3, 4, 5]), bits(u, &[0, 1, 3, 4]), bits(u, &[2]), bits(u, &[5])];
        let sol = min_set_cover(u, &sets, 1000).unwrap();
        assert_eq!(sol.size, 2);
        assert_eq!(sol.chosen, vec![0, 1]);
        assert!(sol.greedy >= 2);
    }

    #[test]
    fn uncovered_universe_is_an_error() {
        let sets = vec![bits(3, &[0, 1])];
        assert!(matches!(min_set_cover(3, &sets, 10), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = rng.random_range(1..10);
            let m = rng.random_range(1..9);
            let mut sets: Vec<FixedBitSet> = (0..m)
                .map(|_| {
                    let e: Vec<usize> = (0..u).filter(|_| rng.random_bool(0.35)).collect();
                    bits(u, &e)
                })
                .collect();
            sets.push(bits(u, &(0..u).filter(|e| e % 3 == 0).collect::<Vec<_>>()));
            for e in 0..u {
                if !sets.iter().any(|s| s.contains(e)) {
                    sets.push(bits(u, &[e]));
                }
            }
            let sol = min_set_cover(u, &sets, 1 << 20).unwrap();
            assert_eq!(sol.size, brute(u, &sets));
            let mut cov = FixedBitSet::with_capacity(u);
            sol.chosen.iter().for_each(|&i| cov.union_with(&sets[i]));
            assert_eq!(cov.count_ones(..), u);
        }
    }

    #[test]
    fn node_cap_is_reported() {
        // many overlapping sets and a tiny budget
        let u = 12;
        let sets: Vec<FixedBitSet> = (0..u).map(|i| bits(u, &[i, (i + 1) % u, (i + 5) % u])).collect();
        let r = min_set_cover(u, &sets, 1);
        assert!(matches!(r, Err(Error::CapExceeded { .. })) || r.unwrap().size <= 4);
    }
}
