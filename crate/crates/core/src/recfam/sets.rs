//! Difference sets, IP sets and SIP sets.

use std::collections::BTreeSet;

use crate::caps::Caps;
use crate::error::{invalid, Result};

use super::window::{IntegerWindowSet, Provenance};

/// `D⁺(A) = {a_n - a_m : n > m}` on `[1, max A - min A]`.
pub fn difference_set(a: &[i64]) -> Result<IntegerWindowSet> {
    if a.windows(2).any(|p| p[0] >= p[1]) {
        return Err(invalid("A must be strictly increasing"));
    }
    let span = match (a.first(), a.last()) {
        (Some(f), Some(l)) => l - f,
        _ => 0,
    };
    let mut s = IntegerWindowSet::empty(1, span.max(1), Provenance::DifferenceSet);
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[..i] {
            s.insert(x - y);
        }
    }
    Ok(s)
}

fn finite_sums(gens: &[i64], caps: &Caps) -> Result<(BTreeSet<i64>, i64)> {
    if gens.is_empty() {
        return Err(invalid("at least one generator is required"));
    }
    if gens.iter().any(|&g| g <= 0) {
        return Err(invalid("generators must be positive"));
    }
    let d = gens.len() as u32;
    let count = 1u128.checked_shl(d).unwrap_or(u128::MAX);
    caps.check_states("IP set size", count)?;
    let total: i64 = gens.iter().try_fold(0i64, |a, &g| a.checked_add(g)).ok_or_else(|| invalid("sum overflows"))?;
    caps.check_states("IP window", total as u128)?;
    let mut sums = BTreeSet::from([0i64]);
    for &g in gens {
        let next: Vec<i64> = sums.iter().map(|&s| s + g).collect();
        sums.extend(next);
    }
    Ok((sums, total))
}

/// `IP{n_i}`: all sums over nonempty subsets of the generators.
pub fn ip_set(gens: &[i64], caps: &Caps) -> Result<IntegerWindowSet> {
    let (sums, total) = finite_sums(gens, caps)?;
    let mut s = IntegerWindowSet::empty(1, total, Provenance::IpGenerated);
    for &v in sums.iter().filter(|&&v| v > 0) {
        s.insert(v);
    }
    Ok(s)
}

/// `SIP{n_i} = {a - b > 0 : a, b ∈ IP{n_i} ∪ {0}}`.
pub fn sip_set(gens: &[i64], caps: &Caps) -> Result<IntegerWindowSet> {
    let (sums, total) = finite_sums(gens, caps)?;
    let pairs = (sums.len() as u128).pow(2);
    if pairs > caps.search_nodes as u128 {
        return Err(crate::error::Error::cap("SIP pairs", caps.search_nodes as u128, pairs));
    }
    let v: Vec<i64> = sums.into_iter().collect();
    let mut s = IntegerWindowSet::empty(1, total, Provenance::Sip);
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[..i] {
            s.insert(a - b);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differences() {
        let a: Vec<i64> = (0..=10).collect();
        assert_eq!(difference_set(&a).unwrap().members(), (1..=10).collect::<Vec<_>>());
        let p: Vec<i64> = (0..=6).map(|i| 1 << i).collect();
        let d = difference_set(&p).unwrap();
        let mut oracle = BTreeSet::new();
        for i in 0..p.len() {
            for j in 0..i {
                oracle.insert(p[i] - p[j]);
            }
        }
        assert_eq!(d.len(), oracle.len());
        assert_eq!(d.len(), 21);
        assert!(difference_set(&[5]).unwrap().is_empty());
        assert!(difference_set(&[3, 2]).is_err());
    }

    #[test]
    fn sip_examples() {
        let caps = Caps::default();
        assert_eq!(ip_set(&[1], &caps).unwrap().members(), vec![1]);
        assert_eq!(sip_set(&[1], &caps).unwrap().members(), vec![1]);
        assert_eq!(ip_set(&[1, 2], &caps).unwrap().members(), vec![1, 2, 3]);
        assert_eq!(sip_set(&[1, 2], &caps).unwrap().members(), vec![1, 2, 3]);
        let ip = ip_set(&[1, 10, 100], &caps).unwrap();
        assert_eq!(ip.members(), vec![1, 10, 11, 100, 101, 110, 111]);
        let sip = sip_set(&[1, 10, 100], &caps).unwrap();
        let mut with0 = ip.members();
        with0.push(0);
        let mut oracle = BTreeSet::new();
        for &a in &with0 {
            for &b in &with0 {
                if a > b {
                    oracle.insert(a - b);
                }
            }
        }
        assert_eq!(sip.members(), oracle.into_iter().collect::<Vec<_>>());
        assert!(ip.members().iter().all(|&n| sip.contains(n)));
    }

    #[test]
    fn cap_enforced() {
        let caps = Caps { states: 16, ..Caps::default() };
        assert!(ip_set(&[1, 2, 4, 8, 16], &caps).is_err());
        assert!(ip_set(&[0, 1], &Caps::default()).is_err());
    }
}
