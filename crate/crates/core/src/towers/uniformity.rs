//! Worst deviation of window frequencies of partition names from their
//! masses.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::entrolab::markov::{periodic_orbit_measure, MarkovMeasure};
use crate::error::{invalid, Error, Result};
use crate::symcore::cover::PartitionSpec;
use crate::symcore::subshift::{Seed, Subshift, SubshiftKind};
use crate::symcore::word::{fmt_word, Word};

/// Anything that assigns masses to cylinder words `[w]_0`.
pub trait CylinderMeasure: Sync {
    fn label(&self) -> String;
    fn mass(&self, w: &[u8]) -> Result<f64>;
}

impl CylinderMeasure for MarkovMeasure {
    fn label(&self) -> String {
        MarkovMeasure::label(self).to_string()
    }

    fn mass(&self, w: &[u8]) -> Result<f64> {
        Ok(self.measure_f64(w))
    }
}

/// Unique invariant measure of a primitive substitution, from the Perron
/// vectors of the induced substitutions on `k`-blocks.
pub struct SubstitutionFrequencies {
    x: Subshift,
    rules: Vec<Vec<u8>>,
    cache: Mutex<HashMap<usize, BTreeMap<Vec<u8>, f64>>>,
}

impl SubstitutionFrequencies {
    pub fn new(x: &Subshift) -> Result<Self> {
        let SubshiftKind::Substitution { rules } = x.kind() else {
            return Err(invalid("substitution frequencies need a substitution subshift"));
        };
        Ok(SubstitutionFrequencies {
            x: x.clone(),
            rules: rules.iter().map(|w| w.0.clone()).collect(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Frequencies of all words of length `k`.
    pub fn frequencies(&self, k: usize) -> Result<BTreeMap<Vec<u8>, f64>> {
        if let Some(f) = self.cache.lock().unwrap().get(&k) {
            return Ok(f.clone());
        }
        let lang: Vec<Vec<u8>> = self.x.language(k)?.into_iter().map(|w| w.0).collect();
        let index: HashMap<&[u8], usize> = lang.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let n = lang.len();
        let mut m = vec![vec![0.0; n]; n];
        for (j, b) in lang.iter().enumerate() {
            let img: Vec<u8> = b.iter().flat_map(|&s| self.rules[s as usize].iter().copied()).collect();
            let first = if k == 1 { img.len() } else { self.rules[b[0] as usize].len() };
            for p in 0..first {
                let c = &img[p..p + k];
                let i = *index.get(c).ok_or_else(|| invalid("substitution image leaves the language"))?;
                m[i][j] += 1.0;
            }
        }
        // I + M shares the Perron vector and is aperiodic
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        let v = perron_vector(&m);
        let total: f64 = v.iter().sum();
        let out: BTreeMap<Vec<u8>, f64> = lang.into_iter().zip(v.iter().map(|p| p / total)).collect();
        self.cache.lock().unwrap().insert(k, out.clone());
        Ok(out)
    }
}

fn perron_vector(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let mut w = vec![0.0; n];
        for (i, row) in m.iter().enumerate() {
            w[i] = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if diff < 1e-15 {
            break;
        }
    }
    v
}

impl CylinderMeasure for SubstitutionFrequencies {
    fn label(&self) -> String {
        "substitution frequencies".into()
    }

    fn mass(&self, w: &[u8]) -> Result<f64> {
        if w.is_empty() {
            return Ok(1.0);
        }
        Ok(self.frequencies(w.len())?.get(w).copied().unwrap_or(0.0))
    }
}

/// Natural invariant measure of `x`: the Parry measure of an SFT, the
/// substitution frequencies, or the periodic orbit measure of a rational
/// rotation coding.
pub fn natural_measure(x: &Subshift) -> Result<Box<dyn CylinderMeasure>> {
    match x.kind() {
        SubshiftKind::Substitution { .. } => Ok(Box::new(SubstitutionFrequencies::new(x)?)),
        SubshiftKind::Sturmian { .. } => {
            Ok(Box::new(periodic_orbit_measure(x.ell(), &Word(x.sturmian_period()))?))
        }
        _ => Ok(Box::new(MarkovMeasure::parry(x)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformityMode {
    /// Every admissible window.
    Exhaustive,
    /// Declared deterministic sample; the deviation is a lower bound.
    Sampled { walks: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityRow {
    pub n: usize,
    pub deviation: f64,
    pub windows: u64,
    /// First symbols of a window attaining the deviation.
    pub witness: String,
    pub lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub partition: String,
    pub depth: usize,
    pub measure: String,
    pub mode: UniformityMode,
    pub rows: Vec<UniformityRow>,
    /// Deviations are non-increasing in `N`.
    pub decreasing: bool,
}

struct Names {
    index: HashMap<Vec<u8>, usize>,
    masses: Vec<f64>,
    span: usize,
}

/// Names of `k` consecutive partition cells, keyed by the block of length
/// `W + k - 1` that determines them.
fn names(x: &Subshift, p: &PartitionSpec, mu: &dyn CylinderMeasure, k: usize) -> Result<Names> {
    let (_, w) = p.window();
    let span = w.max(1) + k - 1;
    let mut name_ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut masses = Vec::new();
    let mut index = HashMap::new();
    for block in x.language(span)? {
        let mut name = Vec::with_capacity(k);
        for i in 0..k {
            let sub = &block.0[i..i + w.max(1)];
            let c = if w == 0 { Some(0) } else { p.cell_of(&sub[..w], p.window().0) };
            name.push(c.ok_or_else(|| invalid("partition does not cover an admissible block"))?);
        }
        let next = name_ids.len();
        let id = *name_ids.entry(name).or_insert(next);
        if id == masses.len() {
            masses.push(0.0);
        }
        masses[id] += mu.mass(&block.0)?;
        index.insert(block.0, id);
    }
    Ok(Names { index, masses, span })
}

fn window_deviation(window: &[u8], n: usize, names: &Names, counts: &mut [u32]) -> f64 {
    counts.iter_mut().for_each(|c| *c = 0);
    for i in 0..n {
        if let Some(&id) = names.index.get(&window[i..i + names.span]) {
            counts[id] += 1;
        }
    }
    counts
        .iter()
        .zip(&names.masses)
        .map(|(&c, &m)| (c as f64 / n as f64 - m).abs())
        .fold(0.0, f64::max)
}

fn sample_sources(x: &Subshift, len: usize, walks: u64, seed: u64) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    let mut push = |r: Result<Word>| {
        if let Ok(w) = r {
            out.push(w.0);
        }
    };
    match x.kind() {
        SubshiftKind::Substitution { .. } => {
            for a in 0..x.ell() as u8 {
                push(x.orbit_segment(&Seed::FixedPoint(a), len));
            }
        }
        SubshiftKind::Sturmian { .. } => push(x.orbit_segment(&Seed::Default, len)),
        _ => {
            for plen in 1..=3usize {
                let mut p = vec![0u8; plen];
                loop {
                    push(x.orbit_segment(&Seed::Periodic(Word(p.clone())), len));
                    if !crate::symcore::word::next_word(&mut p, x.ell()) {
                        break;
                    }
                }
            }
            for i in 0..walks {
                push(x.orbit_segment(&Seed::Walk(seed.wrapping_add(i)), len));
            }
        }
    }
    Ok(out)
}

/// Worst deviation `max_B |(1/N) Σ_{i<N} 1_B(T^i y) - μ(B)|` over cells `B`
/// of the `depth`-fold iterated partition, for each `N` in `n_list`.
pub fn uniformity_defect(
    x: &Subshift,
    p: &PartitionSpec,
    mu: &dyn CylinderMeasure,
    n_list: &[usize],
    depth: usize,
    mode: UniformityMode,
) -> Result<UniformityReport> {
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    let names = names(x, p, mu, depth)?;
    let mut rows = Vec::new();
    let mut counts = vec![0u32; names.masses.len()];
    for &n in n_list {
        if n == 0 {
            return Err(invalid("window lengths must be positive"));
        }
        let len = n + names.span - 1;
        let (mut best, mut witness, mut windows) = (0.0f64, Vec::new(), 0u64);
        let mut consider = |w: &[u8], best: &mut f64, witness: &mut Vec<u8>| {
            let d = window_deviation(w, n, &names, &mut counts);
            if d > *best || witness.is_empty() {
                *best = d.max(*best);
                *witness = w[..w.len().min(64)].to_vec();
            }
        };
        match mode {
            UniformityMode::Exhaustive => {
                let count = x.count_words(len)?;
                if count > x.caps().states as u128 {
                    return Err(Error::cap(
                        format!("admissible windows of length {len} (use sampled mode)"),
                        x.caps().states as u128,
                        count,
                    ));
                }
                for w in x.language_arc(len)?.iter() {
                    consider(&w.0, &mut best, &mut witness);
                    windows += 1;
                }
            }
            UniformityMode::Sampled { walks, seed } => {
                let extra = 16;
                for src in sample_sources(x, len + extra, walks, seed)? {
                    for off in 0..=src.len().saturating_sub(len) {
                        consider(&src[off..off + len], &mut best, &mut witness);
                        windows += 1;
                    }
                }
            }
        }
        rows.push(UniformityRow {
            n,
            deviation: best,
            windows,
            witness: fmt_word(&witness),
            lower_bound: matches!(mode, UniformityMode::Sampled { .. }),
        });
    }
    let decreasing = rows.windows(2).all(|r| r[1].deviation <= r[0].deviation + 1e-12);
    Ok(UniformityReport {
        partition: p.cells().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" | "),
        depth,
        measure: mu.label(),
        mode,
        rows,
        decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morse_frequencies() {
        let x = Subshift::morse();
        let f = SubstitutionFrequencies::new(&x).unwrap();
        let one = f.frequencies(1).unwrap();
        assert!((one[&vec![0]] - 0.5).abs() < 1e-12);
        let two = f.frequencies(2).unwrap();
        // 00 and 11 have frequency 1/6, 01 and 10 have 1/3
        assert!((two[&vec![0, 0]] - 1.0 / 6.0).abs() < 1e-9);
        assert!((two[&vec![0, 1]] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn morse_deviation_decreases() {
        let x = Subshift::morse();
        let mu = SubstitutionFrequencies::new(&x).unwrap();
        let p = PartitionSpec::generating(&x).unwrap();
        let r = uniformity_defect(&x, &p, &mu, &[16, 64, 256], 1, UniformityMode::Exhaustive).unwrap();
        assert!(r.decreasing, "{r:?}");
        assert!(r.rows[2].deviation < 0.05);
    }

    #[test]
    fn full_shift_has_witness() {
        let x = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let p = PartitionSpec::generating(&x).unwrap();
        let r = uniformity_defect(&x, &p, &mu, &[8, 64], 1, UniformityMode::Sampled { walks: 4, seed: 1 }).unwrap();
        assert!(r.rows.iter().all(|row| row.deviation >= 0.5 && row.lower_bound));
        let ex = uniformity_defect(&x, &p, &mu, &[8], 1, UniformityMode::Exhaustive).unwrap();
        assert!((ex.rows[0].deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn trivial_partition_has_no_defect() {
        let x = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let p = PartitionSpec::trivial(&x);
        let r = uniformity_defect(&x, &p, &mu, &[4, 8], 2, UniformityMode::Exhaustive).unwrap();
        assert!(r.rows.iter().all(|row| row.deviation < 1e-12));
    }
}
