//! `H_μ(α_0^{n-1})` for cylinder partitions under Markov measures.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exact::Rational;
use crate::symcore::cover::PartitionSpec;
use crate::symcore::subshift::Subshift;

use super::blocks::{phi, ENTROPY_TOL};
use super::markov::{ChainWeight, MarkovMeasure};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionEntropyRow {
    pub n: usize,
    /// `H_μ(α_0^{n-1})`
    pub joint: f64,
    /// `(1/n) H_μ(α_0^{n-1})`
    pub cesaro: f64,
    /// `H_μ(α_0^{n-1}) - H_μ(α_0^{n-2})`
    pub conditional: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionEntropy {
    pub n_max: usize,
    pub rows: Vec<PartitionEntropyRow>,
    /// Conditional entropy at `n_max`; equals `h_μ(α)` once `n_max` exceeds
    /// the memory of the joint process.
    pub estimate: f64,
    pub cesaro: f64,
    pub monotone: bool,
    pub exact_masses: bool,
}

fn name_masses<W: ChainWeight>(
    x: &Subshift,
    alpha: &PartitionSpec,
    mu: &MarkovMeasure,
    n: usize,
) -> Result<Option<Vec<f64>>> {
    let (lo, w) = alpha.window();
    let len = w + n - 1;
    let Some(words) = mu.positive_words::<W>(len, x.caps().states)? else {
        return Ok(None);
    };
    let mut acc: BTreeMap<Vec<usize>, W> = BTreeMap::new();
    for (word, mass) in words {
        let name: Vec<usize> = (0..n)
            .map(|j| alpha.cell_of(&word[j..j + w], lo))
            .collect::<Option<_>>()
            .ok_or_else(|| {
                crate::error::Error::InvalidPartition(format!(
                    "a word charged by {} lies in no cell",
                    mu.label()
                ))
            })?;
        let e = acc.entry(name).or_insert_with(W::zero);
        *e = e.clone() + mass;
    }
    Ok(Some(acc.into_values().map(|m| m.to_f64()).collect()))
}

/// Entropy of the `α`-name process under `μ` for `1 ≤ n ≤ n_max`, with
/// cylinder masses computed exactly when `μ` carries rational data.
pub fn partition_entropy_under_markov(
    x: &Subshift,
    alpha: &PartitionSpec,
    mu: &MarkovMeasure,
    n_max: usize,
) -> Result<PartitionEntropy> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    mu.validate_on(x)?;
    let exact = mu.is_exact();
    let mut rows: Vec<PartitionEntropyRow> = Vec::with_capacity(n_max);
    let mut prev = 0.0;
    for n in 1..=n_max {
        let masses = if exact {
            name_masses::<Rational>(x, alpha, mu, n)?.expect("exact data present")
        } else {
            name_masses::<f64>(x, alpha, mu, n)?.expect("float data present")
        };
        let joint: f64 = masses.iter().map(|&p| phi(p)).sum();
        rows.push(PartitionEntropyRow {
            n,
            joint,
            cesaro: joint / n as f64,
            conditional: joint - prev,
        });
        prev = joint;
    }
    let monotone = rows.windows(2).all(|p| {
        p[1].cesaro <= p[0].cesaro + ENTROPY_TOL && p[1].conditional <= p[0].conditional + ENTROPY_TOL
    });
    assert!(monotone, "entropy of a stationary process must be non-increasing in n");
    let last = rows.last().unwrap();
    Ok(PartitionEntropy {
        n_max,
        estimate: last.conditional,
        cesaro: last.cesaro,
        rows,
        monotone,
        exact_masses: exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::cover::parse_partition;

    #[test]
    fn examples() {
        let full = Subshift::full(2).unwrap();
        let b = MarkovMeasure::uniform_bernoulli(2);
        let gen = PartitionSpec::generating(&full).unwrap();
        let e = partition_entropy_under_markov(&full, &gen, &b, 6).unwrap();
        assert!(e.rows.iter().all(|r| (r.cesaro - 2f64.ln()).abs() < 1e-12));
        let t = partition_entropy_under_markov(&full, &PartitionSpec::trivial(&full), &b, 4).unwrap();
        assert_eq!(t.estimate, 0.0);

        let gm = Subshift::golden_mean();
        let parry = MarkovMeasure::parry(&gm).unwrap();
        let g = PartitionSpec::generating(&gm).unwrap();
        let e = partition_entropy_under_markov(&gm, &g, &parry, 10).unwrap();
        let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e.estimate - h).abs() < 1e-6);
        assert!(e.cesaro > h);
    }

    #[test]
    fn coarser_partition_has_smaller_entropy() {
        let full = Subshift::full(2).unwrap();
        let mu = MarkovMeasure::bernoulli(&[crate::exact::rat(1, 3), crate::exact::rat(2, 3)]).unwrap();
        let fine = PartitionSpec::generating(&full).unwrap();
        let coarse = parse_partition(&full, "00|01+10+11").unwrap();
        let a = partition_entropy_under_markov(&full, &fine, &mu, 8).unwrap();
        let b = partition_entropy_under_markov(&full, &coarse, &mu, 8).unwrap();
        assert!(b.estimate <= a.estimate + 1e-12);
    }

    #[test]
    fn measure_off_the_subshift_is_rejected() {
        let gm = Subshift::golden_mean();
        let g = PartitionSpec::generating(&gm).unwrap();
        assert!(partition_entropy_under_markov(&gm, &g, &MarkovMeasure::uniform_bernoulli(2), 3).is_err());
    }
}
