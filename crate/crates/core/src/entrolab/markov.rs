use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::exact::{solve_linear, Rational, Weight};
use crate::symcore::subshift::Subshift;
use crate::symcore::word::{fmt_word, Word};

use super::spectral::dominant_perron;

/// Tolerance for float row sums and stationarity.
pub const MARKOV_TOL: f64 = 1e-9;

/// Exact rational chain data, present when the measure was built from
/// rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactChain {
    pub trans: Vec<Vec<Rational>>,
    pub pi: Vec<Rational>,
}

/// A shift-invariant Markov measure of memory `m`: states are `m`-blocks,
/// `trans[i][s]` is the probability that symbol `s` follows state `i`, and `pi`
/// is the stationary law of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    ell: usize,
    memory: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    next: Vec<Vec<Option<usize>>>,
    trans: Vec<Vec<f64>>,
    pi: Vec<f64>,
    exact: Option<ExactChain>,
    label: String,
}

/// Scalar types for which a measure can hand out its chain data.
pub trait ChainWeight: Weight {
    fn chain(m: &MarkovMeasure) -> Option<(&[Vec<Self>], &[Self])>;
}

impl ChainWeight for f64 {
    fn chain(m: &MarkovMeasure) -> Option<(&[Vec<f64>], &[f64])> {
        Some((&m.trans, &m.pi))
    }
}

impl ChainWeight for Rational {
    fn chain(m: &MarkovMeasure) -> Option<(&[Vec<Rational>], &[Rational])> {
        m.exact.as_ref().map(|e| (e.trans.as_slice(), e.pi.as_slice()))
    }
}

fn state_transitions(ell: usize, memory: usize, states: &[Vec<u8>]) -> (HashMap<Vec<u8>, usize>, Vec<Vec<Option<usize>>>) {
    let index: HashMap<Vec<u8>, usize> =
        states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let next = states
        .iter()
        .map(|st| {
            (0..ell as u8)
                .map(|s| {
                    if memory == 0 {
                        Some(0)
                    } else {
                        let mut n = st[1..].to_vec();
                        n.push(s);
                        index.get(&n).copied()
                    }
                })
                .collect()
        })
        .collect();
    (index, next)
}

/// Stationary vector of a chain given as a state-to-state matrix, if unique.
fn stationary<W: Weight>(m: &[Vec<W>]) -> Option<Vec<W>> {
    let n = m.len();
    // rows: (P^T - I) with the last equation replaced by sum = 1
    let mut a = vec![vec![W::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            a[j][i] = m[i][j].clone();
        }
        a[i][i] = a[i][i].clone() - W::one();
    }
    let mut b = vec![W::zero(); n];
    a[n - 1] = vec![W::one(); n];
    b[n - 1] = W::one();
    solve_linear(a, b)
}

impl MarkovMeasure {
    fn assemble(
        ell: usize,
        memory: usize,
        states: Vec<Vec<u8>>,
        trans: Vec<Vec<f64>>,
        pi: Vec<f64>,
        exact: Option<ExactChain>,
        label: String,
    ) -> Result<Self> {
        let (index, next) = state_transitions(ell, memory, &states);
        let m = MarkovMeasure {
            ell,
            memory,
            states,
            index,
            next,
            trans,
            pi,
            exact,
            label,
        };
        m.check_structure()?;
        Ok(m)
    }

    fn check_structure(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(invalid("a Markov measure needs at least one state"));
        }
        if self.memory == 0 && self.states.len() != 1 {
            return Err(invalid("memory-0 measures have exactly one state"));
        }
        for (i, row) in self.trans.iter().enumerate() {
            if row.len() != self.ell {
                return Err(invalid(format!("row {i} has {} entries, expected {}", row.len(), self.ell)));
            }
            if row.iter().any(|&p| !(p >= 0.0)) {
                return Err(invalid(format!("row {i} has a negative or NaN entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > MARKOV_TOL {
                return Err(invalid(format!("row {i} sums to {s}, not 1")));
            }
            for (sym, &p) in row.iter().enumerate() {
                if p > 0.0 && self.next[i][sym].is_none() {
                    return Err(invalid(format!(
                        "transition {}{} leaves the state set",
                        fmt_word(&self.states[i]),
                        sym
                    )));
                }
            }
        }
        if let Some(e) = &self.exact {
            for (i, row) in e.trans.iter().enumerate() {
                if row.iter().any(|p| p < &Rational::zero()) {
                    return Err(invalid(format!("row {i} has a negative entry")));
                }
                if row.iter().cloned().sum::<Rational>() != Rational::one() {
                    return Err(invalid(format!("row {i} does not sum to 1 exactly")));
                }
            }
        }
        self.check_invariant()
    }

    /// `πP = π` (exactly for rational data, within [`MARKOV_TOL`] otherwise).
    pub fn check_invariant(&self) -> Result<()> {
        if (self.pi.iter().sum::<f64>() - 1.0).abs() > MARKOV_TOL {
            return Err(invalid("stationary vector does not sum to 1"));
        }
        let pushed = self.push_matrix::<f64>(&self.pi);
        for (a, b) in pushed.iter().zip(&self.pi) {
            if (a - b).abs() > MARKOV_TOL {
                return Err(invalid(format!("measure {} is not shift-invariant", self.label)));
            }
        }
        if let Some(e) = &self.exact {
            if e.pi.iter().cloned().sum::<Rational>() != Rational::one()
                || self.push_matrix::<Rational>(&e.pi) != e.pi
            {
                return Err(invalid(format!("measure {} is not shift-invariant", self.label)));
            }
        }
        Ok(())
    }

    fn state_matrix<W: ChainWeight>(&self) -> Option<Vec<Vec<W>>> {
        let (trans, _) = W::chain(self)?;
        let n = self.states.len();
        let mut m = vec![vec![W::zero(); n]; n];
        for i in 0..n {
            for s in 0..self.ell {
                if let Some(j) = self.next[i][s] {
                    m[i][j] = m[i][j].clone() + trans[i][s].clone();
                }
            }
        }
        Some(m)
    }

    fn push_matrix<W: ChainWeight>(&self, v: &[W]) -> Vec<W> {
        self.step(v).unwrap_or_default()
    }

    /// Float chain from rows over the given states; `pi` is solved for when absent.
    pub fn from_rows(
        ell: usize,
        memory: usize,
        states: Vec<Vec<u8>>,
        trans: Vec<Vec<f64>>,
        pi: Option<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        let pi = match pi {
            Some(p) => p,
            None => {
                let tmp = Self::skeleton(ell, memory, &states, &trans);
                let m = tmp.state_matrix::<f64>().unwrap();
                stationary(&m).ok_or_else(|| {
                    invalid("stationary vector is not unique; supply it explicitly")
                })?
            }
        };
        Self::assemble(ell, memory, states, trans, pi, None, label)
    }

    /// Exact chain from rational rows; `pi` is solved for when absent.
    pub fn from_rational_rows(
        ell: usize,
        memory: usize,
        states: Vec<Vec<u8>>,
        trans: Vec<Vec<Rational>>,
        pi: Option<Vec<Rational>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        let ftrans: Vec<Vec<f64>> =
            trans.iter().map(|r| r.iter().map(|p| p.to_f64()).collect()).collect();
        let pi = match pi {
            Some(p) => p,
            None => {
                let mut tmp = Self::skeleton(ell, memory, &states, &ftrans);
                tmp.exact = Some(ExactChain {
                    trans: trans.clone(),
                    pi: Vec::new(),
                });
                let m = tmp.state_matrix::<Rational>().unwrap();
                stationary(&m).ok_or_else(|| {
                    invalid("stationary vector is not unique; supply it explicitly")
                })?
            }
        };
        let fpi = pi.iter().map(|p| p.to_f64()).collect();
        Self::assemble(ell, memory, states, ftrans, fpi, Some(ExactChain { trans, pi }), label)
    }

    fn skeleton(ell: usize, memory: usize, states: &[Vec<u8>], trans: &[Vec<f64>]) -> Self {
        let (index, next) = state_transitions(ell, memory, states);
        MarkovMeasure {
            ell,
            memory,
            states: states.to_vec(),
            index,
            next,
            trans: trans.to_vec(),
            pi: vec![0.0; states.len()],
            exact: None,
            label: String::new(),
        }
    }

    /// Bernoulli measure with rational weights.
    pub fn bernoulli(probs: &[Rational]) -> Result<Self> {
        let label = format!(
            "bernoulli({})",
            probs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        );
        Self::from_rational_rows(
            probs.len(),
            0,
            vec![Vec::new()],
            vec![probs.to_vec()],
            Some(vec![Rational::one()]),
            label,
        )
    }

    /// Uniform Bernoulli measure on `ell` symbols.
    pub fn uniform_bernoulli(ell: usize) -> Self {
        let p = vec![Rational::from_ratio(1, ell as i64); ell];
        Self::bernoulli(&p).expect("uniform weights are valid")
    }

    /// The Parry measure (measure of maximal entropy) on the dominant
    /// component of an SFT.
    pub fn parry(x: &Subshift) -> Result<Self> {
        let g = x.require_graph("the Parry measure")?;
        let p = dominant_perron(g);
        let mut trans = vec![vec![0.0; x.ell()]; g.len()];
        let mut pi = vec![0.0; g.len()];
        let in_comp: Vec<bool> = (0..g.len()).map(|v| p.component.binary_search(&v).is_ok()).collect();
        for v in 0..g.len() {
            if in_comp[v] {
                for &(s, w) in g.successors(v) {
                    if in_comp[w] {
                        trans[v][s as usize] = p.right[w] / (p.lambda * p.right[v]);
                    }
                }
                pi[v] = p.left[v] * p.right[v];
            } else {
                // unreachable states: any admissible row keeps the structure valid
                let succ = g.successors(v);
                trans[v][succ[0].0 as usize] = 1.0;
            }
        }
        let z: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|q| *q /= z);
        for row in trans.iter_mut() {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|q| *q /= s);
        }
        Self::assemble(x.ell(), g.memory(), g.vertices().to_vec(), trans, pi, None, "parry".into())
    }

    /// Each admissible successor equally likely (exact).
    pub fn uniform_edges(x: &Subshift) -> Result<Self> {
        let g = x.require_graph("uniform edge measures")?;
        let trans: Vec<Vec<Rational>> = (0..g.len())
            .map(|v| {
                let d = g.successors(v).len() as i64;
                let mut row = vec![Rational::zero(); x.ell()];
                for &(s, _) in g.successors(v) {
                    row[s as usize] = Rational::from_ratio(1, d);
                }
                row
            })
            .collect();
        Self::from_rational_rows(x.ell(), g.memory(), g.vertices().to_vec(), trans, None, "uniform")
    }

    /// `(1 - t) Parry + t uniform-edges`, as a float chain.
    pub fn perturbed(x: &Subshift, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid("perturbation weight must lie in [0, 1]"));
        }
        let parry = Self::parry(x)?;
        let unif = Self::uniform_edges(x)?;
        let trans: Vec<Vec<f64>> = parry
            .trans
            .iter()
            .zip(&unif.trans)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| (1.0 - t) * p + t * q).collect())
            .collect();
        Self::from_rows(x.ell(), parry.memory, parry.states, trans, None, format!("perturb:{t}"))
    }

    /// Exact chain on the vertex presentation of an SFT; `rows[v][k]` is the
    /// probability of the `k`-th admissible successor of vertex `v`.
    pub fn on_graph(x: &Subshift, rows: &[Vec<Rational>], label: &str) -> Result<Self> {
        let g = x.require_graph("graph Markov measures")?;
        if rows.len() != g.len() {
            return Err(invalid(format!("expected {} rows, got {}", g.len(), rows.len())));
        }
        let mut trans = Vec::new();
        for (v, r) in rows.iter().enumerate() {
            let succ = g.successors(v);
            if r.len() != succ.len() {
                return Err(invalid(format!("row {v} needs {} entries", succ.len())));
            }
            let mut row = vec![Rational::zero(); x.ell()];
            for (&(s, _), p) in succ.iter().zip(r) {
                row[s as usize] = p.clone();
            }
            trans.push(row);
        }
        Self::from_rational_rows(x.ell(), g.memory(), g.vertices().to_vec(), trans, None, label)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state_index(&self, block: &[u8]) -> Option<usize> {
        self.index.get(block).copied()
    }

    pub fn trans(&self) -> &[Vec<f64>] {
        &self.trans
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn exact(&self) -> Option<&ExactChain> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn next_state(&self, state: usize, sym: u8) -> Option<usize> {
        self.next[state][sym as usize]
    }

    /// `-Σ_i π_i Σ_s P_is log P_is`.
    pub fn entropy(&self) -> f64 {
        self.pi
            .iter()
            .zip(&self.trans)
            .map(|(p, row)| p * row.iter().map(|&q| super::blocks::phi(q)).sum::<f64>())
            .sum()
    }

    /// Law of the state after reading `w` at coordinates `[0, |w|)`, scaled
    /// by `μ([w])`.
    pub fn after_word<W: ChainWeight>(&self, w: &[u8]) -> Option<Vec<W>> {
        let (_, pi) = W::chain(self)?;
        let m = self.memory;
        if w.len() < m {
            return Some(
                self.states
                    .iter()
                    .zip(pi)
                    .map(|(s, p)| if s.ends_with(w) { p.clone() } else { W::zero() })
                    .collect(),
            );
        }
        let mut v = vec![W::zero(); self.states.len()];
        if let Some(i) = self.state_index(&w[..m]) {
            v[i] = pi[i].clone();
        }
        self.read(&v, &w[m..])
    }

    /// Continues a state law by reading the fixed word `w`.
    pub fn read<W: ChainWeight>(&self, v: &[W], w: &[u8]) -> Option<Vec<W>> {
        let (trans, _) = W::chain(self)?;
        let mut cur = v.to_vec();
        for &s in w {
            let mut next = vec![W::zero(); self.states.len()];
            for (i, mass) in cur.iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                let p = &trans[i][s as usize];
                if p.is_zero() {
                    continue;
                }
                if let Some(j) = self.next[i][s as usize] {
                    next[j] = next[j].clone() + mass.clone() * p.clone();
                }
            }
            cur = next;
        }
        Some(cur)
    }

    /// One unconstrained step of a state law.
    pub fn step<W: ChainWeight>(&self, v: &[W]) -> Option<Vec<W>> {
        let (trans, _) = W::chain(self)?;
        let mut next = vec![W::zero(); self.states.len()];
        for (i, mass) in v.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for s in 0..self.ell {
                let p = &trans[i][s];
                if p.is_zero() {
                    continue;
                }
                if let Some(j) = self.next[i][s] {
                    next[j] = next[j].clone() + mass.clone() * p.clone();
                }
            }
        }
        Some(next)
    }

    /// `μ([w])` for a cylinder at any fixed position.
    pub fn measure<W: ChainWeight>(&self, w: &[u8]) -> Option<W> {
        Some(self.after_word::<W>(w)?.into_iter().fold(W::zero(), |a, b| a + b))
    }

    pub fn measure_f64(&self, w: &[u8]) -> f64 {
        self.measure::<f64>(w).unwrap()
    }

    /// Words of length `len` with positive measure, with their masses, in
    /// lexicographic order.
    pub fn positive_words<W: ChainWeight>(&self, len: usize, cap: u64) -> Result<Option<Vec<(Vec<u8>, W)>>> {
        let Some((trans, pi)) = W::chain(self) else {
            return Ok(None);
        };
        let m = self.memory;
        let mut out = Vec::new();
        if len < m {
            let mut acc: std::collections::BTreeMap<Vec<u8>, W> = Default::default();
            for (s, p) in self.states.iter().zip(pi) {
                if !p.is_zero() {
                    let e = acc.entry(s[..len].to_vec()).or_insert_with(W::zero);
                    *e = e.clone() + p.clone();
                }
            }
            return Ok(Some(acc.into_iter().collect()));
        }
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by(|&a, &b| self.states[a].cmp(&self.states[b]));
        let mut stack: Vec<(usize, Vec<u8>, W)> = Vec::new();
        for &i in order.iter().rev() {
            if !pi[i].is_zero() {
                stack.push((i, self.states[i].clone(), pi[i].clone()));
            }
        }
        while let Some((state, word, mass)) = stack.pop() {
            if word.len() == len {
                out.push((word, mass));
                if out.len() as u64 > cap {
                    return Err(crate::error::Error::cap("positive-measure words", cap as u128, out.len() as u128));
                }
                continue;
            }
            for s in (0..self.ell).rev() {
                let p = &trans[state][s];
                if p.is_zero() {
                    continue;
                }
                let j = self.next[state][s].expect("checked at construction");
                let mut w = word.clone();
                w.push(s as u8);
                stack.push((j, w, mass.clone() * p.clone()));
            }
        }
        Ok(Some(out))
    }

    /// Checks that every word of positive measure is admissible in `x`.
    pub fn validate_on(&self, x: &Subshift) -> Result<()> {
        if x.ell() != self.ell {
            return Err(invalid("measure alphabet does not match the subshift"));
        }
        let len = self.memory.max(x.graph().map_or(1, |g| g.memory())) + 1;
        let words = self
            .positive_words::<f64>(len, x.caps().states)?
            .expect("float data always present");
        for (w, _) in words {
            if !x.is_admissible(&w)? {
                return Err(invalid(format!(
                    "measure {} charges the non-admissible word {}",
                    self.label,
                    fmt_word(&w)
                )));
            }
        }
        Ok(())
    }

    /// Positive-transition successors of a state.
    fn support_succ(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.ell).filter_map(move |s| {
            if self.trans[i][s] > 0.0 {
                self.next[i][s]
            } else {
                None
            }
        })
    }

    /// Closed communicating classes of the state graph.
    pub fn closed_classes(&self) -> Vec<Vec<usize>> {
        let n = self.states.len();
        let reach: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                let mut seen = vec![false; n];
                let mut stack = vec![i];
                seen[i] = true;
                while let Some(v) = stack.pop() {
                    for w in self.support_succ(v) {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                seen
            })
            .collect();
        let mut done = vec![false; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if done[i] {
                continue;
            }
            let class: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
            for &j in &class {
                done[j] = true;
            }
            let closed = class.iter().all(|&v| self.support_succ(v).all(|w| class.contains(&w)));
            if closed {
                classes.push(class);
            }
        }
        classes
    }

    /// Ergodic components with their weights `π(C)`. Components of zero
    /// weight are dropped.
    pub fn ergodic_decomposition(&self) -> Result<Vec<(f64, MarkovMeasure)>> {
        let classes = self.closed_classes();
        if classes.len() == 1 && self.pi.iter().all(|&p| p > 0.0) {
            return Ok(vec![(1.0, self.clone())]);
        }
        let mut out = Vec::new();
        for (k, class) in classes.iter().enumerate() {
            let weight: f64 = class.iter().map(|&i| self.pi[i]).sum();
            if weight <= 0.0 {
                continue;
            }
            let states: Vec<Vec<u8>> = class.iter().map(|&i| self.states[i].clone()).collect();
            let label = format!("{}#{}", self.label, k);
            let comp = match &self.exact {
                Some(e) => {
                    let w: Rational = class.iter().map(|&i| e.pi[i].clone()).sum();
                    let trans = class.iter().map(|&i| e.trans[i].clone()).collect();
                    let pi = class.iter().map(|&i| e.pi[i].clone() / w.clone()).collect();
                    Self::from_rational_rows(self.ell, self.memory, states, trans, Some(pi), label)?
                }
                None => {
                    let trans = class.iter().map(|&i| self.trans[i].clone()).collect();
                    let pi = class.iter().map(|&i| self.pi[i] / weight).collect();
                    Self::from_rows(self.ell, self.memory, states, trans, Some(pi), label)?
                }
            };
            out.push((weight, comp));
        }
        Ok(out)
    }

    /// True when some ergodic component of positive weight lives on a single
    /// periodic orbit (an atom on a periodic orbit).
    pub fn has_periodic_atom(&self) -> Result<bool> {
        for (_, comp) in self.ergodic_decomposition()? {
            let all_single = (0..comp.states.len()).all(|i| comp.support_succ(i).count() <= 1)
                && (0..comp.states.len()).all(|i| comp.trans[i].iter().filter(|&&p| p > 0.0).count() <= 1);
            if all_single {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// States consistent with a prefix ending in `s` at index `pos`, given the
    /// states `cur` consistent with the prefix before it. Tracks support only.
    pub fn support_step(&self, cur: &[bool], pos: usize, s: u8) -> Vec<bool> {
        let mut out = vec![false; self.states.len()];
        for (i, &on) in cur.iter().enumerate() {
            if !on {
                continue;
            }
            if pos < self.memory {
                if self.states[i][pos] == s {
                    out[i] = true;
                }
            } else if self.trans[i][s as usize] > 0.0 {
                if let Some(j) = self.next[i][s as usize] {
                    out[j] = true;
                }
            }
        }
        out
    }

    pub fn support_start(&self) -> Vec<bool> {
        self.pi.iter().map(|&p| p > 0.0).collect()
    }

    /// Human-readable summary.
    pub fn describe(&self) -> String {
        format!("{} (memory {}, {} states)", self.label, self.memory, self.states.len())
    }
}

/// Parses a measure on `x`: `parry`, `uniform`, `perturb:t`,
/// `bernoulli:p0,p1,...`, `graph:row;row;...` (successor probabilities per
/// vertex, see [`MarkovMeasure::on_graph`]) or `periodic:word`.
pub fn parse_measure(x: &Subshift, spec: &str) -> Result<MarkovMeasure> {
    let spec = spec.trim();
    let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let rationals = |s: &str| -> Result<Vec<Rational>> {
        s.split(',')
            .map(|t| crate::exact::parse_rational(t.trim()).ok_or_else(|| invalid(format!("not a rational: {t:?}"))))
            .collect()
    };
    let mu = match head {
        "parry" => MarkovMeasure::parry(x)?,
        "uniform" if x.graph().is_some() => MarkovMeasure::uniform_edges(x)?,
        "uniform" => MarkovMeasure::uniform_bernoulli(x.ell()),
        "perturb" | "perturbed" => {
            let t: f64 = arg.trim().parse().map_err(|_| invalid(format!("bad perturbation weight {arg:?}")))?;
            MarkovMeasure::perturbed(x, t)?
        }
        "bernoulli" => MarkovMeasure::bernoulli(&rationals(arg)?)?,
        "graph" => {
            let rows = arg.split(';').map(rationals).collect::<Result<Vec<_>>>()?;
            MarkovMeasure::on_graph(x, &rows, spec)?
        }
        "periodic" => periodic_orbit_measure(x.ell(), &Word::parse(arg)?)?,
        _ => return Err(invalid(format!("unknown measure {spec:?}"))),
    };
    mu.validate_on(x)?;
    Ok(mu.with_label(spec))
}

/// Uniform (equidistributed) measure on the orbit of a periodic word.
pub fn periodic_orbit_measure(ell: usize, period: &Word) -> Result<MarkovMeasure> {
    let q = period.len();
    if q == 0 {
        return Err(invalid("empty period"));
    }
    // memory q: states are the q rotations, each followed by its next symbol
    let rot: Vec<Vec<u8>> = (0..q)
        .map(|i| (0..q).map(|j| period[(i + j) % q]).collect())
        .collect();
    let mut states = rot.clone();
    states.sort();
    states.dedup();
    let d = states.len() as i64;
    let trans = states
        .iter()
        .map(|s| {
            let mut row = vec![Rational::zero(); ell];
            row[s[0] as usize] = Rational::one();
            row
        })
        .collect();
    let pi = vec![Rational::from_ratio(1, d); states.len()];
    MarkovMeasure::from_rational_rows(ell, q, states, trans, Some(pi), format!("orbit({period})"))
}
