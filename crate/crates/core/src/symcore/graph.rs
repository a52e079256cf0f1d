//! Higher-block vertex-shift presentation of a subshift of finite type.

use std::collections::HashMap;

use num_integer::Integer;

use crate::caps::Caps;
use crate::error::{invalid, Result};
use crate::symcore::word::{next_word, Word};

/// Vertices are the admissible `memory`-blocks; an edge `u -s-> v` exists when
/// `u` followed by `s` is admissible and `v` is the resulting suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexGraph {
    alphabet: usize,
    memory: usize,
    vertices: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    succ: Vec<Vec<(u8, usize)>>,
    pred: Vec<Vec<(u8, usize)>>,
}

fn avoids(w: &[u8], forbidden: &[Vec<u8>]) -> bool {
    forbidden
        .iter()
        .all(|f| f.len() > w.len() || !w.windows(f.len()).any(|x| x == f.as_slice()))
}

impl VertexGraph {
    /// Compiles a forbidden-word list into a trimmed vertex shift.
    pub fn compile(alphabet: usize, forbidden: &[Word], caps: &Caps) -> Result<Self> {
        let forb: Vec<Vec<u8>> = forbidden.iter().map(|w| w.0.clone()).collect();
        if forb.iter().any(|f| f.is_empty()) {
            return Err(invalid("forbidden words must be nonempty"));
        }
        let max_len = forb.iter().map(|f| f.len()).max().unwrap_or(0);
        let memory = max_len.saturating_sub(1).max(1);
        let total = (alphabet as u128).checked_pow(memory as u32).unwrap_or(u128::MAX);
        caps.check_states("SFT vertex count", total)?;

        let mut vertices = Vec::new();
        let mut w = vec![0u8; memory];
        loop {
            if avoids(&w, &forb) {
                vertices.push(w.clone());
            }
            if !next_word(&mut w, alphabet) {
                break;
            }
        }
        let mut g = Self::from_vertices(alphabet, memory, vertices, |u, s| {
            let mut ext = u.to_vec();
            ext.push(s);
            avoids(&ext, &forb)
        });
        g.trim();
        if g.vertices.is_empty() {
            return Err(invalid("the subshift is empty"));
        }
        Ok(g)
    }

    fn from_vertices(
        alphabet: usize,
        memory: usize,
        vertices: Vec<Vec<u8>>,
        allowed: impl Fn(&[u8], u8) -> bool,
    ) -> Self {
        let index: HashMap<Vec<u8>, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut succ = vec![Vec::new(); vertices.len()];
        let mut pred = vec![Vec::new(); vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            for s in 0..alphabet as u8 {
                if !allowed(v, s) {
                    continue;
                }
                let mut next = v[1..].to_vec();
                next.push(s);
                if let Some(&j) = index.get(&next) {
                    succ[i].push((s, j));
                    pred[j].push((v[0], i));
                }
            }
        }
        VertexGraph {
            alphabet,
            memory,
            vertices,
            index,
            succ,
            pred,
        }
    }

    /// Removes vertices that cannot be extended to a bi-infinite path.
    fn trim(&mut self) {
        let n = self.vertices.len();
        let mut alive = vec![true; n];
        let mut indeg: Vec<usize> = self.pred.iter().map(|p| p.len()).collect();
        let mut outdeg: Vec<usize> = self.succ.iter().map(|s| s.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0 || outdeg[i] == 0).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(_, w) in &self.succ[v] {
                if alive[w] {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        stack.push(w);
                    }
                }
            }
            for &(_, w) in &self.pred[v] {
                if alive[w] {
                    outdeg[w] -= 1;
                    if outdeg[w] == 0 {
                        stack.push(w);
                    }
                }
            }
        }
        if alive.iter().all(|&a| a) {
            return;
        }
        let kept: Vec<Vec<u8>> = self
            .vertices
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(v, _)| v.clone())
            .collect();
        let old = std::mem::take(self);
        *self = Self::from_vertices(old.alphabet, old.memory, kept, |u, s| {
            let i = old.index[u];
            old.succ[i].iter().any(|&(t, _)| t == s)
        });
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &[u8] {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    pub fn index_of(&self, block: &[u8]) -> Option<usize> {
        self.index.get(block).copied()
    }

    pub fn successors(&self, v: usize) -> &[(u8, usize)] {
        &self.succ[v]
    }

    pub fn step(&self, v: usize, s: u8) -> Option<usize> {
        self.succ[v].iter().find(|&&(t, _)| t == s).map(|&(_, w)| w)
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.len();
        let mut a = vec![vec![0u64; n]; n];
        for (i, s) in self.succ.iter().enumerate() {
            for &(_, j) in s {
                a[i][j] += 1;
            }
        }
        a
    }

    pub fn is_admissible(&self, w: &[u8]) -> bool {
        let m = self.memory;
        if w.len() < m {
            return self.vertices.iter().any(|v| v.starts_with(w));
        }
        let Some(mut v) = self.index_of(&w[..m]) else {
            return false;
        };
        for &s in &w[m..] {
            match self.step(v, s) {
                Some(n) => v = n,
                None => return false,
            }
        }
        true
    }

    /// Number of admissible words of length `n`.
    pub fn count_words(&self, n: usize) -> u128 {
        let m = self.memory;
        if n < m {
            let mut prefixes: Vec<&[u8]> = self.vertices.iter().map(|v| &v[..n]).collect();
            prefixes.dedup();
            return prefixes.len() as u128;
        }
        let mut counts = vec![1u128; self.len()];
        for _ in 0..(n - m) {
            let mut next = vec![0u128; self.len()];
            for (i, s) in self.succ.iter().enumerate() {
                for &(_, j) in s {
                    next[j] = next[j].saturating_add(counts[i]);
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    /// Admissible words of length `n` in lexicographic order.
    pub fn words(&self, n: usize, caps: &Caps) -> Result<Vec<Word>> {
        caps.check_states("language size", self.count_words(n))?;
        let m = self.memory;
        if n < m {
            let mut out: Vec<Word> = self.vertices.iter().map(|v| Word(v[..n].to_vec())).collect();
            out.dedup();
            return Ok(out);
        }
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(n);
        for (i, v) in self.vertices.iter().enumerate() {
            buf.clear();
            buf.extend_from_slice(v);
            self.extend_dfs(i, n, &mut buf, &mut out);
        }
        Ok(out)
    }

    fn extend_dfs(&self, v: usize, n: usize, buf: &mut Vec<u8>, out: &mut Vec<Word>) {
        if buf.len() == n {
            out.push(Word(buf.clone()));
            return;
        }
        for &(s, w) in &self.succ[v] {
            buf.push(s);
            self.extend_dfs(w, n, buf, out);
            buf.pop();
        }
    }

    /// Vertex indices compatible with a word shorter than the memory
    /// (as a prefix), or the single end vertex of a longer admissible word.
    pub fn end_vertices(&self, w: &[u8]) -> Vec<usize> {
        let m = self.memory;
        if w.len() >= m {
            if !self.is_admissible(w) {
                return Vec::new();
            }
            return self.index_of(&w[w.len() - m..]).into_iter().collect();
        }
        // vertices whose suffix is w
        (0..self.len()).filter(|&i| self.vertices[i].ends_with(w)).collect()
    }

    /// Strongly connected components (Tarjan), each sorted, listed in order of
    /// their smallest vertex.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.succ[v].len() {
                    let w = self.succ[v][*pos].1;
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Components that carry at least one cycle.
    pub fn nontrivial_sccs(&self) -> Vec<Vec<usize>> {
        self.sccs()
            .into_iter()
            .filter(|c| c.len() > 1 || self.succ[c[0]].iter().any(|&(_, w)| w == c[0]))
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.sccs().len() == 1
    }

    /// Period (gcd of cycle lengths) of the component containing `comp`.
    pub fn period_of(&self, comp: &[usize]) -> usize {
        let inside: HashMap<usize, ()> = comp.iter().map(|&v| (v, ())).collect();
        let mut level: HashMap<usize, i64> = HashMap::new();
        level.insert(comp[0], 0);
        let mut queue = std::collections::VecDeque::from([comp[0]]);
        let mut g: i64 = 0;
        while let Some(v) = queue.pop_front() {
            let lv = level[&v];
            for &(_, w) in &self.succ[v] {
                if !inside.contains_key(&w) {
                    continue;
                }
                match level.get(&w) {
                    Some(&lw) => g = g.gcd(&(lv + 1 - lw)),
                    None => {
                        level.insert(w, lv + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        g.unsigned_abs() as usize
    }

    /// True when the component is a single cycle (every vertex has exactly one
    /// successor inside it), i.e. it only supports one periodic orbit.
    pub fn is_cycle(&self, comp: &[usize]) -> bool {
        comp.iter().all(|&v| {
            self.succ[v]
                .iter()
                .filter(|&&(_, w)| comp.binary_search(&w).is_ok())
                .count()
                == 1
        })
    }

    /// Vertices reachable from `start` in exactly `k` steps, for k = 0..=steps.
    pub fn reach_sets(&self, start: &[usize], steps: usize) -> Vec<Vec<bool>> {
        let mut cur = vec![false; self.len()];
        for &s in start {
            cur[s] = true;
        }
        let mut out = vec![cur.clone()];
        for _ in 0..steps {
            let mut next = vec![false; self.len()];
            for (v, &on) in cur.iter().enumerate() {
                if on {
                    for &(_, w) in &self.succ[v] {
                        next[w] = true;
                    }
                }
            }
            out.push(next.clone());
            cur = next;
        }
        out
    }
}

impl Default for VertexGraph {
    fn default() -> Self {
        VertexGraph {
            alphabet: 2,
            memory: 1,
            vertices: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            pred: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> VertexGraph {
        VertexGraph::compile(2, &[Word::parse("11").unwrap()], &Caps::default()).unwrap()
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let g = golden();
        let fib: Vec<u128> = (1..=10).map(|n| g.count_words(n)).collect();
        assert_eq!(fib, vec![2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        assert!(g.is_irreducible());
        assert_eq!(g.period_of(&[0, 1]), 1);
    }

    #[test]
    fn trimming_removes_dead_ends() {
        // 2 can only be entered, never left
        let forb: Vec<Word> = ["20", "21", "22"].iter().map(|s| Word::parse(s).unwrap()).collect();
        let g = VertexGraph::compile(3, &forb, &Caps::default()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(!g.is_admissible(&[0, 2]));
    }

    #[test]
    fn period_two_permutation() {
        let forb: Vec<Word> = ["00", "11"].iter().map(|s| Word::parse(s).unwrap()).collect();
        let g = VertexGraph::compile(2, &forb, &Caps::default()).unwrap();
        let c = g.nontrivial_sccs();
        assert_eq!(c.len(), 1);
        assert_eq!(g.period_of(&c[0]), 2);
        assert!(g.is_cycle(&c[0]));
    }

    #[test]
    fn empty_subshift_is_rejected() {
        let forb: Vec<Word> = ["0", "1"].iter().map(|s| Word::parse(s).unwrap()).collect();
        assert!(VertexGraph::compile(2, &forb, &Caps::default()).is_err());
    }
}
