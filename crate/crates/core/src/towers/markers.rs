//! Marker words, their occurrence automaton, and first-return chains.
//!
//! A marker set `M` is a set of words of a common length `L`; its base set is
//! `{x : x[1-L..=0] ∈ M}`, the points at which a marker occurrence ends.

use std::collections::HashMap;


use crate::entrolab::markov::{ChainWeight, MarkovMeasure};
use crate::error::{invalid, Error, Result};
use crate::exact::{mat_pow, solve_linear, Matrix};
use crate::symcore::graph::VertexGraph;
use crate::symcore::pattern::exists_with_symbols;
use crate::symcore::subshift::Subshift;

/// Aho-Corasick automaton over words of a common length.
#[derive(Debug, Clone)]
pub struct MatchAutomaton {
    goto: Vec<Vec<usize>>,
    depth: Vec<usize>,
    len: usize,
}

impl MatchAutomaton {
    pub fn new(ell: usize, words: &[Vec<u8>]) -> Result<Self> {
        let len = words.first().map_or(0, |w| w.len());
        if len == 0 || words.iter().any(|w| w.len() != len) {
            return Err(invalid("marker words must be nonempty and of equal length"));
        }
        let mut trie: Vec<Vec<Option<usize>>> = vec![vec![None; ell]];
        let mut depth = vec![0];
        for w in words {
            let mut v = 0;
            for &s in w {
                v = match trie[v][s as usize] {
                    Some(n) => n,
                    None => {
                        trie.push(vec![None; ell]);
                        depth.push(depth[v] + 1);
                        let n = trie.len() - 1;
                        trie[v][s as usize] = Some(n);
                        n
                    }
                };
            }
        }
        let mut goto = vec![vec![0usize; ell]; trie.len()];
        let mut fail = vec![0usize; trie.len()];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..ell {
            if let Some(n) = trie[0][s] {
                goto[0][s] = n;
                queue.push_back(n);
            }
        }
        while let Some(v) = queue.pop_front() {
            for s in 0..ell {
                match trie[v][s] {
                    Some(n) => {
                        fail[n] = goto[fail[v]][s];
                        goto[v][s] = n;
                        queue.push_back(n);
                    }
                    None => goto[v][s] = goto[fail[v]][s],
                }
            }
        }
        Ok(MatchAutomaton { goto, depth, len })
    }

    pub fn len(&self) -> usize {
        self.goto.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goto.is_empty()
    }

    pub fn step(&self, state: usize, s: u8) -> usize {
        self.goto[state][s as usize]
    }

    pub fn run(&self, state: usize, w: &[u8]) -> usize {
        w.iter().fold(state, |a, &s| self.step(a, s))
    }

    /// A marker occurrence ends at the symbol just read.
    pub fn is_match(&self, state: usize) -> bool {
        self.depth[state] == self.len
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    /// Positions (of the last symbol) at which a marker occurrence ends.
    pub fn occurrence_ends(&self, text: &[u8]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut a = 0;
        for (i, &s) in text.iter().enumerate() {
            a = self.step(a, s);
            if self.is_match(a) {
                out.push(i);
            }
        }
        out
    }
}

/// The first-return process to a marker base under a Markov measure: product
/// states (chain state, automaton state) that have not yet seen a new marker.
#[derive(Debug, Clone)]
pub struct ReturnChain<W> {
    states: Vec<(usize, usize)>,
    q0: Vec<W>,
    rows: Vec<Vec<(usize, W)>>,
    exit: Vec<W>,
}

impl<W: ChainWeight> ReturnChain<W> {
    /// `None` when the measure has no data of type `W`.
    pub fn new(mu: &MarkovMeasure, words: &[Vec<u8>], state_cap: u64) -> Result<Option<Self>> {
        let Some((trans, _)) = W::chain(mu) else {
            return Ok(None);
        };
        let ac = MatchAutomaton::new(mu.ell(), words)?;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states: Vec<(usize, usize)> = Vec::new();
        let mut q0: Vec<W> = Vec::new();
        for w in words {
            let a = ac.run(0, w);
            let v = mu.after_word::<W>(w).expect("data present");
            for (i, m) in v.into_iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let k = *index.entry((i, a)).or_insert_with(|| {
                    states.push((i, a));
                    q0.push(W::zero());
                    states.len() - 1
                });
                q0[k] = q0[k].clone() + m;
            }
        }
        let mut rows: Vec<Vec<(usize, W)>> = Vec::new();
        let mut exit: Vec<W> = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let (i, a) = states[k];
            let mut row = Vec::new();
            let mut out = W::zero();
            for s in 0..mu.ell() {
                let p = &trans[i][s];
                if p.is_zero() {
                    continue;
                }
                let j = mu.next_state(i, s as u8).expect("validated chain");
                let b = ac.step(a, s as u8);
                if ac.is_match(b) {
                    out = out + p.clone();
                    continue;
                }
                let t = match index.get(&(j, b)) {
                    Some(&t) => t,
                    None => {
                        if states.len() as u64 >= state_cap {
                            return Err(Error::cap("return-chain states", state_cap as u128, states.len() as u128 + 1));
                        }
                        states.push((j, b));
                        q0.push(W::zero());
                        index.insert((j, b), states.len() - 1);
                        states.len() - 1
                    }
                };
                row.push((t, p.clone()));
            }
            rows.push(row);
            exit.push(out);
            k += 1;
        }
        Ok(Some(ReturnChain { states, q0, rows, exit }))
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// `μ(B)`.
    pub fn base_mass(&self) -> W {
        sum(&self.q0)
    }

    fn step(&self, v: &[W]) -> Vec<W> {
        let mut out = vec![W::zero(); v.len()];
        for (k, m) in v.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (t, p) in &self.rows[k] {
                out[*t] = out[*t].clone() + m.clone() * p.clone();
            }
        }
        out
    }

    /// `μ(B ∩ {r_B = ℓ})` for `1 ≤ ℓ ≤ ℓ_max`, and the residual
    /// `μ(B ∩ {r_B > ℓ_max})`.
    pub fn masses(&self, l_max: usize) -> (Vec<W>, W) {
        let mut v = self.q0.clone();
        let mut out = Vec::with_capacity(l_max);
        for _ in 0..l_max {
            out.push(dot(&v, &self.exit));
            v = self.step(&v);
        }
        (out, sum(&v))
    }

    fn dense(&self) -> Matrix<W> {
        let n = self.states.len();
        let mut q = vec![vec![W::zero(); n]; n];
        for (k, row) in self.rows.iter().enumerate() {
            for (t, p) in row {
                q[k][*t] = q[k][*t].clone() + p.clone();
            }
        }
        q
    }

    /// Solves `(I - Q^step) y = rhs`.
    fn resolvent(&self, q: &Matrix<W>, step: u64, rhs: Vec<W>) -> Result<Vec<W>> {
        let n = self.states.len();
        let qs = mat_pow(q, step);
        let mut a = vec![vec![W::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = -qs[i][j].clone();
            }
            a[i][i] = a[i][i].clone() + W::one();
        }
        solve_linear(a, rhs).ok_or_else(|| {
            Error::Precondition("the measure has mass that never returns to the marker base".into())
        })
    }

    /// `Σ_ℓ ℓ μ(B_ℓ)`, the mass of the skyscraper over the base (Kac).
    pub fn kac_mass(&self) -> Result<W> {
        let q = self.dense();
        let y = self.resolvent(&q, 1, vec![W::one(); self.states.len()])?;
        Ok(dot(&self.q0, &y))
    }

    /// `n Σ_{m ≥ 1} μ(B ∩ {r_B ≥ mn})`: the mass of the levels `t` with
    /// `t < n ⌊r/n⌋` in every column.
    pub fn block_coverage(&self, n: usize) -> Result<W> {
        let q = self.dense();
        let y = self.resolvent(&q, n as u64, vec![W::one(); self.states.len()])?;
        let mut v = self.q0.clone();
        for _ in 1..n {
            v = self.step(&v);
        }
        Ok(W::from_ratio(n as i64, 1) * dot(&v, &y))
    }

    /// `μ(B ∩ {r_B ≡ ρ mod n})` for `ρ = 0..n`.
    pub fn residue_masses(&self, n: usize) -> Result<Vec<W>> {
        let q = self.dense();
        let y = self.resolvent(&q, n as u64, self.exit.clone())?;
        let mut out = vec![W::zero(); n];
        let mut v = self.q0.clone();
        for t in 1..=n {
            out[t % n] = dot(&v, &y);
            v = self.step(&v);
        }
        Ok(out)
    }
}

fn sum<W: ChainWeight>(v: &[W]) -> W {
    v.iter().cloned().fold(W::zero(), |a, b| a + b)
}

fn dot<W: ChainWeight>(a: &[W], b: &[W]) -> W {
    a.iter().zip(b).fold(W::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Something that can enumerate its positive words symbol by symbol.
pub trait Support {
    fn ell(&self) -> usize;
    fn start(&self) -> Vec<bool>;
    fn advance(&self, cur: &[bool], pos: usize, s: u8) -> Vec<bool>;
}

impl ReturnChain<f64> {
    /// Float Kac sums lose about `1/μ(B)` ulps in the resolvent solve.
    pub fn kac_tolerance(&self) -> f64 {
        let base: f64 = self.q0.iter().sum();
        (1e-13 / base).max(1e-9)
    }
}

impl Support for MarkovMeasure {
    fn ell(&self) -> usize {
        MarkovMeasure::ell(self)
    }

    fn start(&self) -> Vec<bool> {
        self.support_start()
    }

    fn advance(&self, cur: &[bool], pos: usize, s: u8) -> Vec<bool> {
        self.support_step(cur, pos, s)
    }
}

impl Support for VertexGraph {
    fn ell(&self) -> usize {
        self.alphabet()
    }

    fn start(&self) -> Vec<bool> {
        vec![true; self.len()]
    }

    fn advance(&self, cur: &[bool], pos: usize, s: u8) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for (v, &on) in cur.iter().enumerate() {
            if !on {
                continue;
            }
            if pos < self.memory() {
                if self.vertex(v)[pos] == s {
                    out[v] = true;
                }
            } else if let Some(w) = self.step(v, s) {
                out[w] = true;
            }
        }
        out
    }
}

/// Lexicographically first positive word of length `len` accepted by
/// `accept`, searched depth first with a node budget.
pub fn lex_first_word<S: Support + ?Sized>(
    support: &S,
    len: usize,
    node_cap: u64,
    mut accept: impl FnMut(&[u8]) -> Result<bool>,
) -> Result<Option<Vec<u8>>> {
    let mut stack: Vec<(Vec<u8>, Vec<bool>)> = vec![(Vec::new(), support.start())];
    let mut nodes = 0u64;
    while let Some((w, cur)) = stack.pop() {
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::cap("marker search nodes", node_cap as u128, nodes as u128));
        }
        if w.len() == len {
            if accept(&w)? {
                return Ok(Some(w));
            }
            continue;
        }
        for s in (0..support.ell() as u8).rev() {
            let next = support.advance(&cur, w.len(), s);
            if next.iter().any(|&b| b) {
                let mut v = w.clone();
                v.push(s);
                stack.push((v, next));
            }
        }
    }
    Ok(None)
}

/// Lexicographically first admissible word matching `pattern` (symbols fixed
/// where given).
pub fn lex_first_matching(g: &VertexGraph, pattern: &[Option<u8>]) -> Option<Vec<u8>> {
    let n = pattern.len();
    let m = g.memory();
    let fits = |v: usize| {
        g.vertex(v)
            .iter()
            .zip(pattern)
            .all(|(a, b)| b.is_none_or(|b| b == *a))
    };
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| g.vertex(a).cmp(g.vertex(b)));
    if n <= m {
        return order.into_iter().find(|&v| fits(v)).map(|v| g.vertex(v)[..n].to_vec());
    }
    // feasible[i][v]: the vertex ending at position i can be continued to n
    let mut feasible = vec![vec![false; g.len()]; n];
    feasible[n - 1] = vec![true; g.len()];
    for i in (m - 1..n - 1).rev() {
        for v in 0..g.len() {
            feasible[i][v] = g
                .successors(v)
                .iter()
                .any(|&(s, w)| pattern[i + 1].is_none_or(|p| p == s) && feasible[i + 1][w]);
        }
    }
    let mut v = order.into_iter().find(|&v| fits(v) && feasible[m - 1][v])?;
    let mut out = g.vertex(v).to_vec();
    for i in m..n {
        let &(s, w) = g
            .successors(v)
            .iter()
            .filter(|&&(s, w)| pattern[i].is_none_or(|p| p == s) && feasible[i][w])
            .min_by_key(|&&(s, _)| s)?;
        out.push(s);
        v = w;
    }
    Some(out)
}

/// Border lengths of `w` (proper prefixes that are also suffixes).
fn borders(w: &[u8]) -> Vec<usize> {
    let n = w.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && w[i] != w[k] {
            k = pi[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let mut out = Vec::new();
    let mut k = if n > 0 { pi[n - 1] } else { 0 };
    while k > 0 {
        out.push(k);
        k = pi[k - 1];
    }
    out
}

/// Can occurrences of `u` and `v` (equal length `L`) end at `0` and `p` in
/// some point of `x`?
pub fn can_cooccur(x: &Subshift, u: &[u8], v: &[u8], p: usize) -> Result<bool> {
    let l = u.len();
    if p < l {
        if u[p..] != v[..l - p] {
            return Ok(false);
        }
        let mut merged = u.to_vec();
        merged.extend_from_slice(&v[l - p..]);
        return x.is_admissible(&merged);
    }
    let mut pat: Vec<Option<u8>> = u.iter().map(|&s| Some(s)).collect();
    pat.extend(std::iter::repeat_n(None, p - l));
    pat.extend(v.iter().map(|&s| Some(s)));
    exists_with_symbols(x, &pat)
}

/// Least `p` in `1..=limit` at which two markers (possibly the same one) can
/// end at distance `p` in `x`; `None` when no such `p` exists.
pub fn min_return(x: &Subshift, markers: &[Vec<u8>], limit: usize) -> Result<Option<usize>> {
    let l = markers.first().map_or(0, |w| w.len());
    if markers.len() == 1 {
        let w = &markers[0];
        let mut shifts: Vec<usize> = borders(w).into_iter().map(|b| l - b).filter(|&p| p <= limit).collect();
        shifts.sort_unstable();
        for p in shifts {
            if can_cooccur(x, w, w, p)? {
                return Ok(Some(p));
            }
        }
        for p in l..=limit {
            if can_cooccur(x, w, w, p)? {
                return Ok(Some(p));
            }
        }
        return Ok(None);
    }
    for p in 1..=limit {
        for u in markers {
            for v in markers {
                if can_cooccur(x, u, v, p)? {
                    return Ok(Some(p));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rational};

    #[test]
    fn automaton_finds_overlapping_occurrences() {
        let ac = MatchAutomaton::new(2, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(ac.occurrence_ends(&[0, 1, 0, 1, 0, 0, 1, 0]), vec![2, 4, 7]);
    }

    #[test]
    fn geometric_returns_to_zero() {
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let rc = ReturnChain::<Rational>::new(&mu, &[vec![0]], 1000).unwrap().unwrap();
        let (m, res) = rc.masses(5);
        for (l, p) in m.iter().enumerate() {
            assert_eq!(*p, rat(1, 2) * rat(1, 1 << (l + 1)));
        }
        assert_eq!(m.iter().cloned().sum::<Rational>() + res, rat(1, 2));
        assert_eq!(rc.kac_mass().unwrap(), rat(1, 1));
    }

    #[test]
    fn block_coverage_matches_direct_sum() {
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let rc = ReturnChain::<Rational>::new(&mu, &[vec![0, 1]], 1000).unwrap().unwrap();
        let (m, _) = rc.masses(400);
        for n in 2..5 {
            let direct: f64 = m
                .iter()
                .enumerate()
                .map(|(i, p)| ((i + 1) / n * n) as f64 * crate::exact::ratio_to_f64(p))
                .sum();
            let exact = crate::exact::ratio_to_f64(&rc.block_coverage(n).unwrap());
            assert!((direct - exact).abs() < 1e-12, "{n}: {direct} vs {exact}");
            let res = rc.residue_masses(n).unwrap();
            for (rho, r) in res.iter().enumerate() {
                let d: f64 = m
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (i + 1) % n == rho)
                    .map(|(_, p)| crate::exact::ratio_to_f64(p))
                    .sum();
                assert!((d - crate::exact::ratio_to_f64(r)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lex_first_pattern_completion() {
        let gm = Subshift::golden_mean();
        let g = gm.graph().unwrap();
        assert_eq!(lex_first_matching(g, &[None, None, Some(1), None]), Some(vec![0, 0, 1, 0]));
        assert_eq!(lex_first_matching(g, &[Some(1), Some(1)]), None);
    }

    #[test]
    fn min_return_of_unbordered_word() {
        let full = Subshift::full(2).unwrap();
        let mut w = vec![0u8; 9];
        w.push(1);
        assert_eq!(min_return(&full, &[w.clone()], 20).unwrap(), Some(10));
        assert_eq!(min_return(&full, &[w], 9).unwrap(), None);
        assert_eq!(min_return(&full, &[vec![0, 0]], 5).unwrap(), Some(1));
    }

    #[test]
    fn lex_first_word_respects_support() {
        let gm = Subshift::golden_mean();
        let parry = MarkovMeasure::parry(&gm).unwrap();
        let w = lex_first_word(&parry, 3, 1000, |w| Ok(w.contains(&1))).unwrap();
        assert_eq!(w, Some(vec![0, 0, 1]));
    }
}
