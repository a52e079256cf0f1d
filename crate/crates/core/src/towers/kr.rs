//! Two-height Kakutani-Rohlin towers: columns over a marker base with
//! return time `ℓ > 10N²` are cut into `u_ℓ` blocks of size `N` followed by
//! `v_ℓ` blocks of size `N + 1`, where `ℓ = N u_ℓ + (N+1) v_ℓ`.

use crate::entrolab::markov::MarkovMeasure;
use crate::error::{invalid, Error, Result};
use crate::exact::{ratio_to_f64, Rational, Weight};
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;

use super::markers::{lex_first_word, min_return, ReturnChain};
use super::tower::{marker_base, Column, TowerDescription, TowerKind};

/// `(u, v)` with `ℓ = N u + (N+1) v` and `v = ℓ mod N`; `None` when `u < 0`.
pub fn decompose(l: usize, n: usize) -> Option<(usize, usize)> {
    let v = l % n;
    let rest = l.checked_sub((n + 1) * v)?;
    Some((rest / n, v))
}

/// Offsets of the marked first layers in a column of height `l`.
pub fn cuts(l: usize, n: usize) -> Option<Vec<usize>> {
    let (u, v) = decompose(l, n)?;
    let mut out = Vec::with_capacity(u + v);
    let mut t = 0;
    for _ in 0..u {
        out.push(t);
        t += n;
    }
    for _ in 0..v {
        out.push(t);
        t += n + 1;
    }
    debug_assert_eq!(t, l);
    Some(out)
}

/// Checks that every column height in `[from, to]` splits into blocks of
/// sizes `N` and `N + 1` exactly.
pub fn verify_cuts(n: usize, from: usize, to: usize) -> bool {
    (from..=to).all(|l| match cuts(l, n) {
        Some(c) => {
            let mut ends = c.clone();
            ends.push(l);
            ends.windows(2).all(|p| p[1] - p[0] == n || p[1] - p[0] == n + 1)
                && c.len() == decompose(l, n).map_or(0, |(u, v)| u + v)
        }
        None => false,
    })
}

/// Rejects measures with a periodic ergodic component and systems whose
/// recurrent part is a union of periodic orbits.
pub(crate) fn require_aperiodic(x: &Subshift, mus: &[&MarkovMeasure]) -> Result<()> {
    if let Some(g) = x.graph() {
        if g.nontrivial_sccs().iter().all(|c| g.is_cycle(c)) {
            return Err(Error::Precondition("every point of the subshift is periodic".into()));
        }
    }
    for mu in mus {
        mu.validate_on(x)?;
        if mu.has_periodic_atom()? {
            return Err(Error::Precondition(format!(
                "{} has an ergodic component on a periodic orbit",
                mu.label()
            )));
        }
    }
    Ok(())
}

/// Lexicographically first `μ`-positive word of length in
/// `[gap + 1, resolution]` whose occurrences cannot end at distance `≤ gap`.
pub(crate) fn find_marker(x: &Subshift, mu: &MarkovMeasure, gap: usize, resolution: usize) -> Result<Word> {
    for len in gap + 1..=resolution {
        let found = lex_first_word(mu, len, x.caps().search_nodes, |w| {
            Ok(min_return(x, &[w.to_vec()], gap)?.is_none())
        })?;
        if let Some(w) = found {
            return Ok(Word(w));
        }
    }
    Err(Error::ResolutionTooCoarse(format!(
        "no marker with minimum return time above {gap} among words of length at most {resolution}"
    )))
}

fn masses<W: crate::entrolab::markov::ChainWeight>(
    chain: &ReturnChain<W>,
    n: usize,
) -> Result<(W, W, W)> {
    let kac = chain.kac_mass()?;
    let res = chain.residue_masses(n)?;
    let c_hi = res
        .iter()
        .enumerate()
        .fold(W::zero(), |a, (rho, m)| a + W::from_ratio(rho as i64, 1) * m.clone());
    let c_lo = (kac.clone() - W::from_ratio(n as i64 + 1, 1) * c_hi.clone()) / W::from_ratio(n as i64, 1);
    Ok((kac, c_lo, c_hi))
}

/// Builds the two-height tower for `μ` with heights `N` and `N + 1`.
///
/// `resolution` bounds the marker length (default `2(10N² + 1)`).
pub fn kr_two_heights(x: &Subshift, mu: &MarkovMeasure, n: usize, resolution: Option<usize>) -> Result<TowerDescription> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    require_aperiodic(x, &[mu])?;
    let gap = 10 * n * n;
    let resolution = resolution.unwrap_or(2 * (gap + 1));
    let marker = find_marker(x, mu, gap, resolution)?;
    let words = vec![marker.0.clone()];
    let min_ret = min_return(x, &words, 2 * marker.len())?.unwrap_or(2 * marker.len() + 1);
    // every height ≥ N² - 1 decomposes; check one full residue cycle past the
    // smallest height and a margin beyond it
    if !verify_cuts(n, min_ret, min_ret + 4 * n * n + n) {
        return Err(invalid("column decomposition failed"));
    }
    let cap = x.caps().states;
    let fchain = ReturnChain::<f64>::new(mu, &words, cap)?.expect("float data");
    let (fkac, flo, fhi) = masses(&fchain, n)?;
    let exact = match ReturnChain::<Rational>::new(mu, &words, cap)? {
        Some(rc) => {
            let (kac, lo, hi) = masses(&rc, n)?;
            if kac != Rational::from_ratio(1, 1) {
                return Err(Error::Precondition(format!(
                    "part of {} never visits the marker base",
                    mu.label()
                )));
            }
            Some((lo, hi))
        }
        None => {
            if (fkac - 1.0).abs() > fchain.kac_tolerance() {
                return Err(Error::Precondition(format!(
                    "part of {} never visits the marker base",
                    mu.label()
                )));
            }
            None
        }
    };
    let col = |h: usize, m: f64, e: Option<&Rational>, piece: &str| Column {
        height: h,
        base_piece: piece.to_string(),
        mass: Some(e.map_or(m, ratio_to_f64)),
        exact_mass: e.map(|r| r.to_string()),
    };
    let columns = vec![
        col(n, flo, exact.as_ref().map(|e| &e.0), "first layers of the size-N blocks"),
        col(n + 1, fhi, exact.as_ref().map(|e| &e.1), "first layers of the size-(N+1) blocks"),
    ];
    Ok(TowerDescription {
        kind: TowerKind::TwoHeight,
        marker_base: marker_base(x.ell(), std::slice::from_ref(&marker))?,
        markers: vec![marker.clone()],
        base_rule: format!(
            "t levels above the last marker end, where t is a cut of the marker column: \
             u blocks of {n} then v blocks of {} with v = height mod {n}",
            n + 1
        ),
        columns,
        min_height: n,
        max_height: Some(n + 1),
        resolution: marker.len(),
        exact: true,
        parameter: n,
        marker_gap: min_ret,
        outer: None,
        aux_marker: None,
        block_size: None,
    })
}

/// Return times to the two-height base along a finite word, read from the
/// marker occurrences it contains (complete marker columns only).
pub fn simulate_two_heights(word: &[u8], marker: &[u8], n: usize) -> Vec<usize> {
    let ac = super::markers::MatchAutomaton::new(
        word.iter().chain(marker).map(|&s| s as usize + 1).max().unwrap_or(2),
        &[marker.to_vec()],
    )
    .expect("nonempty marker");
    let ends = ac.occurrence_ends(word);
    let mut levels = Vec::new();
    for p in ends.windows(2) {
        let l = p[1] - p[0];
        for c in cuts(l, n).unwrap_or_default() {
            levels.push(p[0] + c);
        }
    }
    if let Some(&last) = ends.last() {
        levels.push(last);
    }
    levels.windows(2).map(|p| p[1] - p[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn decomposition() {
        assert_eq!(decompose(91, 3), Some((29, 1)));
        assert_eq!(decompose(7, 3), Some((1, 1)));
        assert_eq!(decompose(5, 3), None);
        assert!(verify_cuts(3, 8, 500));
        assert!(verify_cuts(1, 1, 100));
        for l in 1..200 {
            if let Some((u, v)) = decompose(l, 4) {
                assert_eq!(4 * u + 5 * v, l);
            }
        }
    }

    #[test]
    fn full_shift_n3() {
        let x = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let t = kr_two_heights(&x, &mu, 3, None).unwrap();
        let mut w = vec![0u8; 90];
        w.push(1);
        assert_eq!(t.markers[0].0, w);
        assert_eq!(t.heights(), vec![3, 4]);
        let total: f64 = t.columns.iter().map(|c| c.height as f64 * c.mass.unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let e: Rational = t
            .columns
            .iter()
            .map(|c| Rational::from_ratio(c.height as i64, 1) * crate::exact::parse_rational(c.exact_mass.as_ref().unwrap()).unwrap())
            .sum();
        assert_eq!(e, Rational::from_ratio(1, 1));
    }

    #[test]
    fn degenerate_n1() {
        let x = Subshift::full(2).unwrap();
        let t = kr_two_heights(&x, &MarkovMeasure::uniform_bernoulli(2), 1, None).unwrap();
        assert_eq!(t.columns[0].mass, Some(1.0));
        assert_eq!(t.columns[1].mass, Some(0.0));
    }

    #[test]
    fn periodic_system_rejected() {
        let x = Subshift::period_two();
        let mu = MarkovMeasure::uniform_edges(&x).unwrap();
        assert!(matches!(kr_two_heights(&x, &mu, 2, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn simulated_returns_take_two_values() {
        let n = 2;
        let marker: Vec<u8> = std::iter::repeat_n(0, 40).chain([1]).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut word = Vec::new();
        for _ in 0..30 {
            word.extend(&marker);
            let len = rng.random_range(0..200);
            // random filler that cannot create a marker occurrence
            word.extend((0..len).map(|i| if i % 7 == 0 { 1 } else { rng.random_range(0..2) }));
        }
        word.extend(&marker);
        let r = simulate_two_heights(&word, &marker, n);
        assert!(!r.is_empty());
        assert!(r.iter().all(|&h| h == n || h == n + 1));
    }
}
