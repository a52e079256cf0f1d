//! Fiber averages over marker skyscrapers.

use std::collections::HashMap;

use serde::Serialize;

use crate::entrolab::markov::MarkovMeasure;
use crate::error::{invalid, Result};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;

use super::markers::MatchAutomaton;
use super::tower::{TowerDescription, TowerKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub mean: f64,
    pub eps: f64,
    /// `(ε/10)²`
    pub delta: f64,
    /// Mass of the fibers (of height at most `r_max`) whose average is
    /// within `ε` of the mean.
    pub fraction: f64,
    /// `fraction` plus the mass not accounted for by fibers of height at
    /// most `r_max`.
    pub upper: f64,
    pub residual: f64,
    pub r_max: usize,
    pub min_height: usize,
    /// Least window `N` with `μ{|A_N f - ∫f| ≥ δ} ≤ δ`, if found below the cap.
    pub window: Option<usize>,
    /// `⌈N / δ⌉`: towers at least this tall have `fraction ≥ 1 - ε`.
    pub n0: Option<u64>,
    pub asserted: bool,
}

/// Mean of the indicator of `f` under `mu`.
fn integral(f: &CylinderUnion, mu: &MarkovMeasure) -> f64 {
    if f.is_whole() {
        return 1.0;
    }
    f.words().iter().map(|w| mu.measure_f64(w)).sum()
}

/// Least window `N ≤ cap` whose Birkhoff averages deviate by at least
/// `delta` on a set of measure at most `delta`.
pub fn ergodic_window(f: &CylinderUnion, mu: &MarkovMeasure, delta: f64, cap: usize) -> Option<usize> {
    if f.is_whole() || f.is_empty() {
        return Some(1);
    }
    let mean = integral(f, mu);
    let width = f.width();
    let words: Vec<Vec<u8>> = f.words().iter().cloned().collect();
    let ac = MatchAutomaton::new(mu.ell(), &words).ok()?;
    let m = mu.memory();
    // distribution over (chain state, automaton state) x count
    let mut dist: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut pos = 0usize;
    for (i, st) in mu.states().iter().enumerate() {
        if mu.pi()[i] <= 0.0 {
            continue;
        }
        let mut a = 0;
        let mut c = 0;
        for (p, &s) in st.iter().enumerate() {
            a = ac.step(a, s);
            if ac.is_match(a) && p + 1 >= width {
                c += 1;
            }
        }
        let e = dist.entry((i, a)).or_insert_with(|| vec![0.0; m + 2]);
        e[c] += mu.pi()[i];
    }
    pos += m;
    loop {
        // after reading `pos` symbols the counts cover windows ending before `pos`
        if pos >= width {
            let k = pos + 1 - width;
            if k >= 1 {
                let mut bad = 0.0;
                for v in dist.values() {
                    for (c, &p) in v.iter().enumerate() {
                        if p > 0.0 && (c as f64 / k as f64 - mean).abs() >= delta {
                            bad += p;
                        }
                    }
                }
                if bad <= delta {
                    return Some(k);
                }
                if k >= cap {
                    return None;
                }
            }
        }
        let mut next: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
        for (&(i, a), v) in &dist {
            for s in 0..mu.ell() {
                let p = mu.trans()[i][s];
                if p <= 0.0 {
                    continue;
                }
                let j = mu.next_state(i, s as u8).unwrap();
                let b = ac.step(a, s as u8);
                let hit = usize::from(ac.is_match(b));
                let e = next.entry((j, b)).or_insert_with(|| vec![0.0; v.len() + 1]);
                for (c, &q) in v.iter().enumerate() {
                    if q > 0.0 {
                        e[c + hit] += q * p;
                    }
                }
            }
        }
        dist = next;
        pos += 1;
    }
}

/// Mass of the fibers `{T^i x : 0 ≤ i < r(x)}` of a marker skyscraper whose
/// `f`-average is within `eps` of `∫ f dμ`.
///
/// `f` must depend only on coordinates inside the marker window
/// `[1 - L, 0]`.
pub fn good_fiber_fraction(
    x: &Subshift,
    tower: &TowerDescription,
    f: &CylinderUnion,
    mu: &MarkovMeasure,
    eps: f64,
    r_max: usize,
) -> Result<FiberReport> {
    if tower.kind != TowerKind::Skyscraper {
        return Err(invalid("fiber statistics are computed on marker skyscrapers"));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    mu.validate_on(x)?;
    let l = tower.marker_len();
    let mean = integral(f, mu);
    let delta = (eps / 10.0).powi(2);
    let trivial = f.is_whole() || f.is_empty();
    let (lo, width) = (f.lo(), f.width());
    if !trivial && (lo < 1 - l as i64 || lo + width as i64 - 1 > 0) {
        return Err(invalid(format!(
            "f must depend on coordinates within [{}, 0]",
            1 - l as i64
        )));
    }
    let d = if trivial { 0 } else { (-(lo + width as i64 - 1)) as usize };
    let markers: Vec<Vec<u8>> = tower.markers.iter().map(|w| w.0.clone()).collect();
    let mac = MatchAutomaton::new(x.ell(), &markers)?;
    let fwords: Vec<Vec<u8>> = if trivial { vec![vec![0]] } else { f.words().iter().cloned().collect() };
    let fac = MatchAutomaton::new(x.ell(), &fwords)?;
    let value = |hit: bool| -> usize {
        if trivial {
            usize::from(f.is_whole())
        } else {
            usize::from(hit)
        }
    };

    // state: (chain, marker automaton, f automaton, pending flags) -> count distribution
    type Key = (usize, usize, usize, u64);
    let mut dist: HashMap<Key, Vec<f64>> = HashMap::new();
    for u in &markers {
        let v = mu.after_word::<f64>(u).expect("float data");
        let a = mac.run(0, u);
        let mut b = 0;
        let mut flags = Vec::with_capacity(l);
        for &s in u {
            b = fac.step(b, s);
            flags.push(fac.is_match(b));
        }
        // flags[j] is for coordinate j + 1 - L; commit coordinate -d
        let committed = value(flags[l - 1 - d]);
        let mut pending = 0u64;
        for j in 0..d {
            if flags[l - d + j] {
                pending |= 1 << j;
            }
        }
        for (i, m) in v.into_iter().enumerate() {
            if m > 0.0 {
                let e = dist.entry((i, a, b, pending)).or_insert_with(|| vec![0.0; 2]);
                e[committed] += m;
            }
        }
    }
    let mut good = 0.0;
    let mut accounted = 0.0;
    for t in 1..=r_max {
        let mut next: HashMap<Key, Vec<f64>> = HashMap::new();
        for (&(i, a, b, pend), v) in &dist {
            for s in 0..x.ell() {
                let p = mu.trans()[i][s];
                if p <= 0.0 {
                    continue;
                }
                let j = mu.next_state(i, s as u8).unwrap();
                let a2 = mac.step(a, s as u8);
                if mac.is_match(a2) {
                    // return at time t: the fiber holds levels 0..t
                    for (c, &q) in v.iter().enumerate() {
                        if q > 0.0 {
                            let mass = q * p * t as f64;
                            accounted += mass;
                            if (c as f64 / t as f64 - mean).abs() < eps {
                                good += mass;
                            }
                        }
                    }
                    continue;
                }
                let b2 = fac.step(b, s as u8);
                let hit = fac.is_match(b2);
                let (commit, pend2) = if d == 0 {
                    (value(hit), 0)
                } else {
                    let oldest = pend & 1 == 1;
                    let mut p2 = pend >> 1;
                    if hit {
                        p2 |= 1 << (d - 1);
                    }
                    (value(oldest), p2)
                };
                let e = next.entry((j, a2, b2, pend2)).or_insert_with(|| vec![0.0; t + 2]);
                for (c, &q) in v.iter().enumerate() {
                    if q > 0.0 {
                        e[c + commit] += q * p;
                    }
                }
            }
        }
        dist = next;
    }
    let residual = (1.0 - accounted).max(0.0);
    let window = ergodic_window(f, mu, delta, 4 * r_max.max(64));
    let n0 = window.map(|w| (w as f64 / delta).ceil() as u64);
    let asserted = n0.is_some_and(|n0| tower.min_height as u64 >= n0 && residual < delta);
    if asserted {
        assert!(good >= 1.0 - eps - 1e-9, "fiber lemma violated: {good}");
    }
    Ok(FiberReport {
        mean,
        eps,
        delta,
        fraction: good,
        upper: (good + residual).min(1.0),
        residual,
        r_max,
        min_height: tower.min_height,
        window,
        n0,
        asserted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::word::Word;
    use crate::towers::tower::skyscraper;
    use rand::{Rng, SeedableRng};

    fn tower(marker: &str) -> (Subshift, MarkovMeasure, TowerDescription) {
        let x = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let t = skyscraper(&x, &[Word::parse(marker).unwrap()], &mu, 32).unwrap();
        (x, mu, t)
    }

    #[test]
    fn whole_space_indicator_is_always_good() {
        let (x, mu, t) = tower("0001");
        let r = good_fiber_fraction(&x, &t, &CylinderUnion::whole(2), &mu, 0.1, 400).unwrap();
        assert!(r.fraction > 0.99 && r.upper >= 1.0 - 1e-9);
    }

    #[test]
    fn tall_tower_mostly_good() {
        let (x, mu, t) = tower("000111");
        let f = CylinderUnion::cylinder(2, 0, &[0]);
        let r = good_fiber_fraction(&x, &t, &f, &mu, 0.2, 1500).unwrap();
        assert!(r.fraction >= 0.8, "{r:?}");
        assert!(r.residual < 1e-6);
    }

    #[test]
    fn short_tower_is_reported_not_asserted() {
        let (x, mu, t) = tower("1");
        let f = CylinderUnion::cylinder(2, 0, &[0]);
        let r = good_fiber_fraction(&x, &t, &f, &mu, 0.01, 200).unwrap();
        assert!(r.fraction < 0.99);
        assert!(!r.asserted);
    }

    #[test]
    fn matches_sampled_fibers() {
        // Monte Carlo cross-check of the exact fiber mass
        let (x, mu, t) = tower("011");
        let f = CylinderUnion::cylinder(2, -1, &[1]);
        let r = good_fiber_fraction(&x, &t, &f, &mu, 0.25, 400).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let seq: Vec<u8> = (0..400_000).map(|_| rng.random_range(0..2)).collect();
        let ac = MatchAutomaton::new(2, &[vec![0, 1, 1]]).unwrap();
        let ends = ac.occurrence_ends(&seq);
        let (mut good, mut total) = (0usize, 0usize);
        for p in ends.windows(2) {
            let h = p[1] - p[0];
            let c = (0..h).filter(|&i| seq[p[0] + i - 1] == 1).count();
            total += h;
            if (c as f64 / h as f64 - 0.5).abs() < 0.25 {
                good += h;
            }
        }
        let est = good as f64 / total as f64;
        assert!((est - r.fraction).abs() < 0.01, "{est} vs {}", r.fraction);
    }
}
