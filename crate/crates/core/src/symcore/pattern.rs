//! Existence of points satisfying finitely many cylinder constraints.

use crate::error::{Error, Result};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;

/// True when some point of `x` has the symbol `pattern[i]` (where given) at
/// coordinate `i`.
pub fn exists_with_symbols(x: &Subshift, pattern: &[Option<u8>]) -> Result<bool> {
    if pattern.iter().flatten().any(|&s| s as usize >= x.ell()) {
        return Ok(false);
    }
    match x.graph() {
        Some(g) => {
            let m = g.memory();
            let mut pat = pattern.to_vec();
            if pat.len() < m {
                pat.resize(m, None);
            }
            let matches = |v: &[u8], off: usize| {
                v.iter()
                    .zip(&pat[off..off + v.len()])
                    .all(|(a, b)| b.is_none_or(|b| b == *a))
            };
            let mut cur: Vec<bool> = (0..g.len()).map(|i| matches(g.vertex(i), 0)).collect();
            for p in pat.iter().skip(m) {
                if !cur.iter().any(|&c| c) {
                    return Ok(false);
                }
                let mut next = vec![false; g.len()];
                for (v, &on) in cur.iter().enumerate() {
                    if !on {
                        continue;
                    }
                    for &(s, w) in g.successors(v) {
                        if p.is_none_or(|p| p == s) {
                            next[w] = true;
                        }
                    }
                }
                cur = next;
            }
            Ok(cur.iter().any(|&c| c))
        }
        None => {
            if pattern.is_empty() {
                return Ok(true);
            }
            let lang = x.language_arc(pattern.len())?;
            Ok(lang.iter().any(|w| {
                w.iter()
                    .zip(pattern)
                    .all(|(a, b)| b.is_none_or(|b| b == *a))
            }))
        }
    }
}

/// Upper bound on the number of word combinations tried by [`contains_pattern`].
const MAX_COMBINATIONS: u128 = 1 << 22;

/// True when some point `y` of `x` satisfies `T^{j} y ∈ U` for every
/// constraint `(j, U)`; equivalently `y ∈ ⋂ T^{-j} U`.
pub fn contains_pattern(x: &Subshift, constraints: &[(i64, &CylinderUnion)]) -> Result<bool> {
    let mut active: Vec<CylinderUnion> = Vec::new();
    for (j, u) in constraints {
        if u.is_empty() {
            return Ok(false);
        }
        if !u.is_whole() {
            active.push(u.shifted(*j));
        }
    }
    if active.is_empty() {
        return Ok(true);
    }
    let (lo, width) = CylinderUnion::common_window(active.iter());
    let combos = active
        .iter()
        .fold(1u128, |acc, u| acc.saturating_mul(u.words().len() as u128));
    if combos > MAX_COMBINATIONS {
        return Err(Error::cap("pattern combinations", MAX_COMBINATIONS, combos));
    }
    let lists: Vec<Vec<&Vec<u8>>> = active.iter().map(|u| u.words().iter().collect()).collect();
    let mut choice = vec![0usize; lists.len()];
    loop {
        let mut pat: Vec<Option<u8>> = vec![None; width];
        let mut ok = true;
        'fill: for (k, u) in active.iter().enumerate() {
            let w = lists[k][choice[k]];
            let off = (u.lo() - lo) as usize;
            for (i, &s) in w.iter().enumerate() {
                match pat[off + i] {
                    Some(t) if t != s => {
                        ok = false;
                        break 'fill;
                    }
                    _ => pat[off + i] = Some(s),
                }
            }
        }
        if ok && exists_with_symbols(x, &pat)? {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(false);
            }
            choice[k] += 1;
            if choice[k] < lists[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_has_no_adjacent_ones() {
        let x = Subshift::golden_mean();
        let one = CylinderUnion::cylinder(2, 0, &[1]);
        assert!(!contains_pattern(&x, &[(0, &one), (1, &one)]).unwrap());
        assert!(contains_pattern(&x, &[(0, &one), (2, &one)]).unwrap());
        assert!(contains_pattern(&x, &[(0, &one), (-3, &one)]).unwrap());
    }

    #[test]
    fn period_two_parity() {
        let x = Subshift::period_two();
        let zero = CylinderUnion::cylinder(2, 0, &[0]);
        for n in -6i64..=6 {
            let r = contains_pattern(&x, &[(0, &zero), (n, &zero)]).unwrap();
            assert_eq!(r, n % 2 == 0);
        }
    }

    #[test]
    fn morse_has_no_cubes() {
        let x = crate::symcore::Subshift::morse();
        let pat: Vec<Option<u8>> = [0, 0, 0].iter().map(|&s| Some(s)).collect();
        assert!(!exists_with_symbols(&x, &pat).unwrap());
        assert!(exists_with_symbols(&x, &[Some(0), None, Some(0)]).unwrap());
    }
}
