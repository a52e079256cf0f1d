use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Error, Result};
use crate::exact::Rational;
use crate::symcore::graph::VertexGraph;
use crate::symcore::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SubshiftKind {
    Full,
    Sft {
        forbidden: Vec<Word>,
    },
    Substitution {
        rules: Vec<Word>,
    },
    Sturmian {
        p: u64,
        q: u64,
        #[serde(serialize_with = "ser_rational")]
        intercept: Rational,
    },
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Selects a concrete point for [`Subshift::orbit_segment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    /// Fixed point of a substitution from symbol 0, the Sturmian coding of
    /// the configured intercept, or walk 0 for a shift of finite type.
    Default,
    /// The periodic point `...www...`.
    Periodic(Word),
    /// A point whose forward orbit starts with the given word.
    Prefix(Word),
    /// Iterate the substitution on one symbol.
    FixedPoint(u8),
    /// Uniform random walk on the presentation graph, seeded.
    Walk(u64),
}

/// A finitely presented subshift: full shift, shift of finite type, primitive
/// substitution system, or the periodic Sturmian coding of a rational
/// rotation number.
#[derive(Debug)]
pub struct Subshift {
    alphabet: Alphabet,
    kind: SubshiftKind,
    graph: Option<VertexGraph>,
    caps: Caps,
    cache: Mutex<BTreeMap<usize, Arc<Vec<Word>>>>,
}

impl Clone for Subshift {
    fn clone(&self) -> Self {
        Subshift {
            alphabet: self.alphabet,
            kind: self.kind.clone(),
            graph: self.graph.clone(),
            caps: self.caps,
            cache: Mutex::new(BTreeMap::new()),
        }
    }
}

impl PartialEq for Subshift {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.kind == other.kind
    }
}

impl Subshift {
    pub fn full(size: usize) -> Result<Self> {
        Self::build(Alphabet::new(size)?, SubshiftKind::Full, Caps::default())
    }

    pub fn sft(size: usize, forbidden: Vec<Word>) -> Result<Self> {
        Self::build(Alphabet::new(size)?, SubshiftKind::Sft { forbidden }, Caps::default())
    }

    /// Parses forbidden words from strings.
    pub fn sft_str(size: usize, forbidden: &[&str]) -> Result<Self> {
        let f = forbidden.iter().map(|s| Word::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::sft(size, f)
    }

    pub fn substitution(rules: Vec<Word>) -> Result<Self> {
        Self::build(Alphabet::new(rules.len())?, SubshiftKind::Substitution { rules }, Caps::default())
    }

    pub fn sturmian(p: u64, q: u64, intercept: Rational) -> Result<Self> {
        Self::build(Alphabet::new(2)?, SubshiftKind::Sturmian { p, q, intercept }, Caps::default())
    }

    pub fn morse() -> Self {
        Self::substitution(vec![Word(vec![0, 1]), Word(vec![1, 0])]).expect("valid rules")
    }

    pub fn golden_mean() -> Self {
        Self::sft_str(2, &["11"]).expect("valid")
    }

    /// The permutation shift with the single orbit `...0101...`.
    pub fn period_two() -> Self {
        Self::sft_str(2, &["00", "11"]).expect("valid")
    }

    pub fn with_caps(mut self, caps: Caps) -> Result<Self> {
        if caps != self.caps {
            self = Self::build(self.alphabet, self.kind, caps)?;
        }
        Ok(self)
    }

    pub fn build(alphabet: Alphabet, kind: SubshiftKind, caps: Caps) -> Result<Self> {
        let graph = match &kind {
            SubshiftKind::Full => Some(VertexGraph::compile(alphabet.size(), &[], &caps)?),
            SubshiftKind::Sft { forbidden } => {
                for w in forbidden {
                    w.check(alphabet)?;
                }
                Some(VertexGraph::compile(alphabet.size(), forbidden, &caps)?)
            }
            SubshiftKind::Substitution { rules } => {
                for r in rules {
                    if r.is_empty() {
                        return Err(invalid("substitution images must be nonempty"));
                    }
                    r.check(alphabet)?;
                }
                if !is_primitive(rules) {
                    return Err(invalid("substitution is not primitive"));
                }
                if rules.iter().all(|r| r.len() == 1) {
                    return Err(invalid("substitution must grow"));
                }
                None
            }
            SubshiftKind::Sturmian { p, q, intercept } => {
                if *q < 2 || *p == 0 || p >= q || p.gcd(q) != 1 {
                    return Err(invalid(format!(
                        "Sturmian convergent must satisfy 0 < p < q, q >= 2, gcd(p, q) = 1; got {p}/{q}"
                    )));
                }
                if intercept < &Rational::zero() || intercept >= &Rational::one() {
                    return Err(invalid("Sturmian intercept must lie in [0, 1)"));
                }
                None
            }
        };
        Ok(Subshift {
            alphabet,
            kind,
            graph,
            caps,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn ell(&self) -> usize {
        self.alphabet.size()
    }

    pub fn kind(&self) -> &SubshiftKind {
        &self.kind
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// The vertex-shift presentation (full shifts and SFTs only).
    pub fn graph(&self) -> Option<&VertexGraph> {
        self.graph.as_ref()
    }

    pub fn require_graph(&self, what: &str) -> Result<&VertexGraph> {
        self.graph
            .as_ref()
            .ok_or_else(|| invalid(format!("{what} requires a full shift or shift of finite type")))
    }

    pub fn is_sft(&self) -> bool {
        self.graph.is_some()
    }

    /// Admissible words of length `n`, lexicographically sorted.
    pub fn language(&self, n: usize) -> Result<Vec<Word>> {
        Ok(self.language_arc(n)?.as_ref().clone())
    }

    pub fn language_arc(&self, n: usize) -> Result<Arc<Vec<Word>>> {
        if n == 0 {
            return Ok(Arc::new(vec![Word(Vec::new())]));
        }
        if let Some(hit) = self.cache.lock().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let words = match &self.kind {
            SubshiftKind::Full | SubshiftKind::Sft { .. } => {
                self.graph.as_ref().unwrap().words(n, &self.caps)?
            }
            SubshiftKind::Substitution { rules } => {
                self.caps.check_len("substitution word length", n)?;
                substitution_language(rules, n, &self.caps)?
            }
            SubshiftKind::Sturmian { .. } => {
                self.caps.check_len("Sturmian word length", n)?;
                let period = self.sturmian_period();
                let q = period.len();
                let set: BTreeSet<Vec<u8>> = (0..q)
                    .map(|i| (0..n).map(|j| period[(i + j) % q]).collect())
                    .collect();
                set.into_iter().map(Word).collect()
            }
        };
        let arc = Arc::new(words);
        self.cache.lock().unwrap().insert(n, arc.clone());
        Ok(arc)
    }

    /// Number of admissible words of length `n`.
    pub fn count_words(&self, n: usize) -> Result<u128> {
        match &self.graph {
            Some(g) => Ok(g.count_words(n)),
            None => Ok(self.language_arc(n)?.len() as u128),
        }
    }

    pub fn is_admissible(&self, w: &[u8]) -> Result<bool> {
        if w.iter().any(|&s| s as usize >= self.ell()) {
            return Ok(false);
        }
        match &self.graph {
            Some(g) => Ok(g.is_admissible(w)),
            None => Ok(self
                .language_arc(w.len())?
                .binary_search_by(|x| x.as_slice().cmp(w))
                .is_ok()),
        }
    }

    /// One period of the Sturmian coding: symbol 1 iff
    /// `frac(intercept + i p/q) >= 1 - p/q`.
    pub fn sturmian_period(&self) -> Vec<u8> {
        let SubshiftKind::Sturmian { p, q, intercept } = &self.kind else {
            return Vec::new();
        };
        sturmian_coding(*p, *q, intercept, *q as usize)
    }

    /// The length-`n` coding of the forward orbit of the point selected by `seed`.
    pub fn orbit_segment(&self, seed: &Seed, n: usize) -> Result<Word> {
        if n == 0 {
            return Err(invalid("orbit segment length must be >= 1"));
        }
        match (&self.kind, seed) {
            (_, Seed::Periodic(w)) => {
                w.check(self.alphabet)?;
                if w.is_empty() {
                    return Err(invalid("periodic seed must be nonempty"));
                }
                let reps = (n + 2 * w.len() + self.memory_hint()) / w.len() + 1;
                let long: Vec<u8> = w.iter().copied().cycle().take(reps * w.len()).collect();
                if !self.is_admissible(&long)? {
                    return Err(invalid(format!("periodic point {w} is not in the subshift")));
                }
                Ok(Word(long[..n].to_vec()))
            }
            (_, Seed::Prefix(w)) => {
                if w.len() < n {
                    return Err(invalid(format!("prefix seed has length {} < {n}", w.len())));
                }
                if !self.is_admissible(w)? {
                    return Err(invalid(format!("word {w} is not admissible")));
                }
                Ok(Word(w[..n].to_vec()))
            }
            (SubshiftKind::Substitution { rules }, Seed::Default | Seed::FixedPoint(_)) => {
                let a = match seed {
                    Seed::FixedPoint(a) => *a,
                    _ => 0,
                };
                if a as usize >= self.ell() {
                    return Err(invalid("fixed-point symbol outside alphabet"));
                }
                self.caps.check_len("substitution word length", n)?;
                let mut w = vec![a];
                while w.len() < n {
                    w = apply(rules, &w);
                }
                w.truncate(n);
                Ok(Word(w))
            }
            (SubshiftKind::Sturmian { p, q, intercept }, Seed::Default) => {
                self.caps.check_len("Sturmian word length", n)?;
                Ok(Word(sturmian_coding(*p, *q, intercept, n)))
            }
            (SubshiftKind::Full | SubshiftKind::Sft { .. }, Seed::Default) => {
                self.orbit_segment(&Seed::Walk(0), n)
            }
            (SubshiftKind::Full | SubshiftKind::Sft { .. }, Seed::Walk(s)) => {
                let g = self.graph.as_ref().unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(*s);
                let mut v = rng.random_range(0..g.len());
                let mut out = g.vertex(v).to_vec();
                while out.len() < n {
                    let succ = g.successors(v);
                    let (sym, next) = succ[rng.random_range(0..succ.len())];
                    out.push(sym);
                    v = next;
                }
                out.truncate(n);
                Ok(Word(out))
            }
            (_, other) => Err(invalid(format!("seed {other:?} does not apply to this subshift"))),
        }
    }

    fn memory_hint(&self) -> usize {
        self.graph.as_ref().map_or(2, |g| g.memory() + 1)
    }

    /// Shift of finite type presentation of this system with extra forbidden
    /// words (only for full shifts and SFTs).
    pub fn forbidding(&self, extra: &[Word]) -> Result<Subshift> {
        let mut forbidden = match &self.kind {
            SubshiftKind::Full => Vec::new(),
            SubshiftKind::Sft { forbidden } => forbidden.clone(),
            _ => return Err(invalid("forbidding words requires an SFT")),
        };
        forbidden.extend_from_slice(extra);
        Subshift::build(self.alphabet, SubshiftKind::Sft { forbidden }, self.caps)
    }
}

pub fn sturmian_coding(p: u64, q: u64, intercept: &Rational, n: usize) -> Vec<u8> {
    let alpha = Rational::new(BigInt::from(p), BigInt::from(q));
    let threshold = Rational::one() - alpha.clone();
    (0..n)
        .map(|i| {
            let x = intercept + alpha.clone() * BigInt::from(i);
            let frac = x.clone() - x.floor();
            u8::from(frac >= threshold)
        })
        .collect()
}

pub(crate) fn apply(rules: &[Word], w: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for &s in w {
        out.extend_from_slice(&rules[s as usize]);
    }
    out
}

fn is_primitive(rules: &[Word]) -> bool {
    let l = rules.len();
    let mut m = vec![vec![false; l]; l];
    for (a, r) in rules.iter().enumerate() {
        for &b in r.iter() {
            m[a][b as usize] = true;
        }
    }
    let mut p = m.clone();
    let bound = (l - 1) * (l - 1) + 1;
    for _ in 0..bound {
        if p.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; l]; l];
        for i in 0..l {
            for k in 0..l {
                if p[i][k] {
                    for j in 0..l {
                        next[i][j] |= m[k][j];
                    }
                }
            }
        }
        p = next;
    }
    p.iter().all(|row| row.iter().all(|&x| x))
}

/// Legal two-letter words: closure of the 2-factors of images under the
/// substitution.
fn legal_pairs(rules: &[Word]) -> BTreeSet<Vec<u8>> {
    let mut pairs: BTreeSet<Vec<u8>> = BTreeSet::new();
    for r in rules {
        for w in r.windows(2) {
            pairs.insert(w.to_vec());
        }
    }
    loop {
        let mut added = false;
        let snapshot: Vec<Vec<u8>> = pairs.iter().cloned().collect();
        for ab in snapshot {
            let img = apply(rules, &ab);
            for w in img.windows(2) {
                added |= pairs.insert(w.to_vec());
            }
        }
        if !added {
            return pairs;
        }
    }
}

fn substitution_language(rules: &[Word], n: usize, caps: &Caps) -> Result<Vec<Word>> {
    let l = rules.len();
    let mut images: Vec<Vec<u8>> = (0..l as u8).map(|c| vec![c]).collect();
    while images.iter().map(|w| w.len()).min().unwrap() < n {
        images = images.iter().map(|w| apply(rules, w)).collect();
        let longest = images.iter().map(|w| w.len()).max().unwrap();
        if longest > 2 * caps.word_len {
            return Err(Error::cap(
                "substitution word length",
                2 * caps.word_len as u128,
                longest as u128,
            ));
        }
    }
    let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
    for ab in legal_pairs(rules) {
        let mut w = images[ab[0] as usize].clone();
        w.extend_from_slice(&images[ab[1] as usize]);
        for f in w.windows(n) {
            set.insert(f.to_vec());
        }
    }
    for img in &images {
        for f in img.windows(n) {
            set.insert(f.to_vec());
        }
    }
    caps.check_states("language size", set.len() as u128)?;
    Ok(set.into_iter().map(Word).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn words(v: &[Word]) -> Vec<String> {
        v.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn full_shift_language() {
        let x = Subshift::full(2).unwrap();
        assert_eq!(words(&x.language(2).unwrap()), ["00", "01", "10", "11"]);
    }

    #[test]
    fn golden_mean_language() {
        let x = Subshift::golden_mean();
        assert_eq!(words(&x.language(2).unwrap()), ["00", "01", "10"]);
    }

    #[test]
    fn morse_language() {
        let x = Subshift::morse();
        assert_eq!(
            words(&x.language(3).unwrap()),
            ["001", "010", "011", "100", "101", "110"]
        );
        // brute force: factors of a long prefix of the fixed point
        let long = x.orbit_segment(&Seed::Default, 4096).unwrap();
        for n in 1..=12 {
            let set: BTreeSet<&[u8]> = long.windows(n).collect();
            let lang = x.language(n).unwrap();
            assert_eq!(set.len(), lang.len(), "n = {n}");
            assert!(lang.iter().all(|w| set.contains(w.as_slice())));
        }
    }

    #[test]
    fn morse_fixed_point() {
        let x = Subshift::morse();
        assert_eq!(x.orbit_segment(&Seed::Default, 8).unwrap().to_string(), "01101001");
    }

    #[test]
    fn periodic_seed() {
        let x = Subshift::full(2).unwrap();
        let w = x.orbit_segment(&Seed::Periodic(Word::parse("0").unwrap()), 4).unwrap();
        assert_eq!(w.to_string(), "0000");
        let g = Subshift::golden_mean();
        assert!(g.orbit_segment(&Seed::Periodic(Word::parse("1").unwrap()), 4).is_err());
    }

    #[test]
    fn sturmian_two_thirds() {
        let x = Subshift::sturmian(2, 3, rat(0, 1)).unwrap();
        // orbit 0, 2/3, 1/3 against the split at 1/3
        assert_eq!(x.orbit_segment(&Seed::Default, 3).unwrap().to_string(), "011");
        assert_eq!(words(&x.language(2).unwrap()), ["01", "10", "11"]);
        assert!(Subshift::sturmian(2, 4, rat(0, 1)).is_err());
    }

    #[test]
    fn non_primitive_rejected() {
        let r = vec![Word::parse("00").unwrap(), Word::parse("1").unwrap()];
        assert!(Subshift::substitution(r).is_err());
    }

    #[test]
    fn fibonacci_substitution_is_sturmian_complexity() {
        let x = Subshift::substitution(vec![Word::parse("01").unwrap(), Word::parse("0").unwrap()])
            .unwrap();
        for n in 1..15 {
            assert_eq!(x.language(n).unwrap().len(), n + 1);
        }
    }
}
