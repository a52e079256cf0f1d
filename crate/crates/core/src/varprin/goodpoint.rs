//! Search for points whose partition codings have high block entropy.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entrolab::blocks::phi;
use crate::entrolab::cover_entropy::cover_entropy;
use crate::entrolab::markov::MarkovMeasure;
use crate::error::{invalid, Error, Result};
use crate::symcore::cover::{code_partition, CoverSpec, PartitionSpec};
use crate::symcore::subshift::{Seed, Subshift, SubshiftKind};
use crate::symcore::word::Word;

use super::partitions::{describe, finer_partitions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GoodPointOptions {
    /// Number of measure-weighted walks tried before exhaustive search.
    pub walks: u64,
    pub seed: u64,
    /// Horizon used for the cover entropy estimate.
    pub cover_n: usize,
}

impl Default for GoodPointOptions {
    fn default() -> Self {
        GoodPointOptions {
            walks: 512,
            seed: 0,
            cover_n: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodPointCertificate {
    /// Coordinates from `origin` on.
    pub point: Word,
    pub origin: i64,
    pub source: String,
    pub n: usize,
    pub k_max: usize,
    /// Cover entropy estimate.
    pub h: f64,
    /// `h - 1/K`.
    pub target: f64,
    pub family: Vec<String>,
    /// `bounds[l][k - 1] = H_k(ω(α_l, N, x)) / k`.
    pub bounds: Vec<Vec<f64>>,
    pub min_margin: f64,
}

/// `H_k` of a word over an alphabet of size `ell`.
pub fn coding_entropy(w: &[u8], k: usize, ell: usize) -> f64 {
    if k == 0 || w.len() < k {
        return 0.0;
    }
    let windows = (w.len() - k + 1) as f64;
    let dense = (ell.max(2) as f64).powi(k as i32) <= 4096.0;
    if dense {
        let ell = ell.max(2);
        let size = ell.pow(k as u32);
        let top = size / ell;
        let mut counts = vec![0u32; size];
        let mut code = 0usize;
        for &s in &w[..k - 1] {
            code = code * ell + s as usize;
        }
        for &s in &w[k - 1..] {
            code = code * ell + s as usize;
            counts[code] += 1;
            code %= top;
        }
        counts.iter().filter(|&&c| c > 0).map(|&c| phi(c as f64 / windows)).sum()
    } else {
        let mut counts: HashMap<&[u8], u32> = HashMap::new();
        for win in w.windows(k) {
            *counts.entry(win).or_insert(0) += 1;
        }
        counts.values().map(|&c| phi(c as f64 / windows)).sum()
    }
}

/// Layout of the point word shared by every partition of a family.
pub(crate) struct Layout {
    pub origin: i64,
    pub len: usize,
}

pub(crate) fn layout(family: &[PartitionSpec], n: usize, min_len: usize) -> Layout {
    let origin = family.iter().map(|p| p.window().0.min(0)).min().unwrap_or(0);
    let mut len = min_len.max(1);
    for p in family {
        let (lo, w) = p.window();
        len = len.max((lo - origin) as usize + w + n.saturating_sub(1));
    }
    Layout { origin, len }
}

/// `ω(α, N, x)` for a point word laid out from `origin`.
pub(crate) fn coding(x: &Subshift, alpha: &PartitionSpec, point: &[u8], origin: i64, n: usize) -> Result<Vec<u8>> {
    let start = (alpha.window().0.min(0) - origin) as usize;
    Ok(code_partition(x, alpha, &point[start..], n)?.0)
}

fn bounds_for(
    x: &Subshift,
    family: &[PartitionSpec],
    point: &[u8],
    origin: i64,
    n: usize,
    k_max: usize,
) -> Result<Vec<Vec<f64>>> {
    family
        .iter()
        .map(|alpha| {
            let w = coding(x, alpha, point, origin, n)?;
            Ok((1..=k_max).map(|k| coding_entropy(&w, k, alpha.len()) / k as f64).collect())
        })
        .collect()
}

/// Random word of length `len` under a Markov measure.
pub fn sample_word(mu: &MarkovMeasure, len: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let pick = |p: &[f64], rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &q) in p.iter().enumerate() {
            acc += q;
            if u < acc {
                return i;
            }
        }
        p.iter().rposition(|&q| q > 0.0).unwrap_or(0)
    };
    let mut state = pick(mu.pi(), rng);
    let mut out = mu.states()[state].clone();
    while out.len() < len {
        let s = pick(&mu.trans()[state], rng);
        out.push(s as u8);
        state = mu.next_state(state, s as u8).expect("positive transition");
    }
    out.truncate(len);
    out
}

fn candidates(x: &Subshift, len: usize, opts: &GoodPointOptions) -> Result<Vec<(String, Vec<u8>)>> {
    let mut out = Vec::new();
    match x.kind() {
        SubshiftKind::Full | SubshiftKind::Sft { .. } => {
            let mu = MarkovMeasure::parry(x).or_else(|_| MarkovMeasure::uniform_edges(x))?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for i in 0..opts.walks {
                out.push((format!("{} walk {i} (seed {})", mu.label(), opts.seed), sample_word(&mu, len, &mut rng)));
            }
        }
        SubshiftKind::Substitution { .. } => {
            let total = len + opts.walks as usize;
            for a in 0..x.ell() as u8 {
                if let Ok(w) = x.orbit_segment(&Seed::FixedPoint(a), total) {
                    for off in 0..opts.walks as usize {
                        out.push((format!("fixed point {a} offset {off}"), w.0[off..off + len].to_vec()));
                    }
                }
            }
        }
        SubshiftKind::Sturmian { .. } => {
            let w = x.orbit_segment(&Seed::Default, len + opts.walks as usize)?;
            for off in 0..opts.walks as usize {
                out.push((format!("coding offset {off}"), w.0[off..off + len].to_vec()));
            }
        }
    }
    Ok(out)
}

/// A point `x` whose codings satisfy `H_k(ω(α_l, N, x)) ≥ k(h - 1/K)` for every
/// partition `α_l` finer than `u` at resolution at most `max(K, L)` and every
/// `k ≤ K`, where `h` is the cover entropy estimate of `u`.
pub fn find_good_point(
    x: &Subshift,
    u: &CoverSpec,
    k: usize,
    n: usize,
    opts: &GoodPointOptions,
) -> Result<GoodPointCertificate> {
    if k == 0 || n < k {
        return Err(invalid("need 1 <= K <= N"));
    }
    let h = cover_entropy(x, u, opts.cover_n)?.estimate;
    let target = h - 1.0 / k as f64;
    let family = finer_partitions(x, u, k.max(u.resolution()))?;
    let lay = layout(&family, n, n + k - 1);
    let labels: Vec<String> = family.iter().map(describe).collect();
    let tol = 1e-9;
    let check = |point: &[u8]| -> Result<Option<Vec<Vec<f64>>>> {
        let b = bounds_for(x, &family, point, lay.origin, n, k)?;
        Ok(b.iter().flatten().all(|&v| v >= target - tol).then_some(b))
    };
    let finish = |point: Vec<u8>, source: String, bounds: Vec<Vec<f64>>| {
        let min_margin = bounds.iter().flatten().map(|v| v - target).fold(f64::INFINITY, f64::min);
        GoodPointCertificate {
            point: Word(point),
            origin: lay.origin,
            source,
            n,
            k_max: k,
            h,
            target,
            family: labels.clone(),
            bounds,
            min_margin,
        }
    };
    for (source, point) in candidates(x, lay.len, opts)? {
        if let Some(b) = check(&point)? {
            return Ok(finish(point, source, b));
        }
    }
    let count = x.count_words(lay.len)?;
    if count <= x.caps().states.min(x.caps().search_nodes) as u128 {
        for w in x.language_arc(lay.len)?.iter() {
            if let Some(b) = check(&w.0)? {
                return Ok(finish(w.0.clone(), "exhaustive (lexicographic)".into(), b));
            }
        }
    }
    Err(Error::NotFoundAtN { n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_entropy(w: &[u8], k: usize) -> f64 {
        crate::entrolab::blocks::block_entropy(w, k).unwrap()
    }

    #[test]
    fn coding_entropy_matches_block_entropy() {
        let w: Vec<u8> = (0..200u32).map(|i| ((i * i + 3 * i) % 5 % 3) as u8).collect();
        for k in 1..5 {
            assert!((coding_entropy(&w, k, 3) - brute_entropy(&w, k)).abs() < 1e-12);
        }
        assert!((coding_entropy(&w, 3, 1 << 12) - brute_entropy(&w, 3)).abs() < 1e-12);
    }

    #[test]
    fn full_shift_point() {
        let x = Subshift::full(2).unwrap();
        let u = CoverSpec::generating(&x).unwrap();
        let c = find_good_point(&x, &u, 1, 32, &GoodPointOptions::default()).unwrap();
        assert!((c.h - 2f64.ln()).abs() < 1e-12);
        assert!(c.bounds.iter().flatten().all(|&b| b >= 2f64.ln() - 1.0));
        let c = find_good_point(&x, &u, 4, 256, &GoodPointOptions::default()).unwrap();
        assert!(c.min_margin >= -1e-9);
    }

    #[test]
    fn trivial_cover_is_vacuous() {
        let x = Subshift::golden_mean();
        let c = find_good_point(&x, &CoverSpec::trivial(&x), 2, 16, &GoodPointOptions::default()).unwrap();
        assert_eq!(c.h, 0.0);
    }

    #[test]
    fn golden_mean_point() {
        let x = Subshift::golden_mean();
        let u = CoverSpec::generating(&x).unwrap();
        let c = find_good_point(&x, &u, 1, 64, &GoodPointOptions::default()).unwrap();
        assert!(x.is_admissible(&c.point).unwrap());
        assert!(c.source.contains("walk"));
    }

    #[test]
    fn impossible_target_reports_not_found() {
        let x = Subshift::full(2).unwrap();
        let u = CoverSpec::generating(&x).unwrap();
        // K = 6 with N = 8 leaves too few windows for the entropy bound
        let opts = GoodPointOptions { walks: 16, ..Default::default() };
        assert!(matches!(find_good_point(&x, &u, 6, 8, &opts), Err(Error::NotFoundAtN { n: 8 })));
    }
}
