//! Lower and upper entropy of a cover over a finite Markov family, and the
//! cover entropy they are compared against.

use serde::Serialize;

use crate::entrolab::cover_entropy::cover_entropy;
use crate::entrolab::markov::MarkovMeasure;
use crate::entrolab::partition_entropy::partition_entropy_under_markov;
use crate::error::{invalid, Result};
use crate::symcore::cover::CoverSpec;
use crate::symcore::subshift::Subshift;

use super::partitions::{describe, finer_partitions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicCheck {
    pub measure: String,
    pub components: usize,
    /// `Σ w_i h(μ_i)`.
    pub weighted: f64,
    pub direct: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    pub h_top: f64,
    /// `max_μ min_α h_μ(α)`.
    pub h_check: f64,
    /// `min_α max_μ h_μ(α)`.
    pub h_hat: f64,
    pub tol: f64,
    /// `ȟ ≤ ĥ + tol` and `ĥ ≤ h_top + tol`.
    pub chain_holds: bool,
    pub family: Vec<String>,
    pub partitions: Vec<String>,
    pub resolution: usize,
    pub n_max: usize,
    /// `values[i][j] = h_{μ_i}(α_j)`.
    pub values: Vec<Vec<f64>>,
    pub ergodic: Vec<ErgodicCheck>,
}

/// Evaluates `ȟ` and `ĥ` with the partition family at resolution `≤ r` and
/// the given measures, using `n_max`-step conditional entropies.
pub fn evaluate_h_check(
    x: &Subshift,
    u: &CoverSpec,
    family: &[MarkovMeasure],
    r: usize,
    n_max: usize,
    tol: f64,
) -> Result<VariationalReport> {
    if family.is_empty() {
        return Err(invalid("the measure family is empty"));
    }
    for mu in family {
        mu.validate_on(x)?;
        mu.check_invariant()?;
    }
    let parts = finer_partitions(x, u, r.max(u.resolution()))?;
    let h_top = cover_entropy(x, u, n_max)?.estimate;
    let values = family
        .iter()
        .map(|mu| {
            parts
                .iter()
                .map(|a| Ok(partition_entropy_under_markov(x, a, mu, n_max)?.estimate))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let h_check = values
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    let h_hat = (0..parts.len())
        .map(|j| values.iter().map(|row| row[j]).fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::INFINITY, f64::min);
    let chain_holds = h_check <= h_hat + tol && h_hat <= h_top + tol;
    let mut ergodic = Vec::new();
    for mu in family {
        let comps = mu.ergodic_decomposition()?;
        let weighted: f64 = comps.iter().map(|(w, c)| w * c.entropy()).sum();
        let direct = mu.entropy();
        ergodic.push(ErgodicCheck {
            measure: mu.label().to_string(),
            components: comps.len(),
            weighted,
            direct,
            holds: (weighted - direct).abs() <= 1e-9,
        });
    }
    Ok(VariationalReport {
        h_top,
        h_check,
        h_hat,
        tol,
        chain_holds,
        family: family.iter().map(|m| m.describe()).collect(),
        partitions: parts.iter().map(describe).collect(),
        resolution: r,
        n_max,
        values,
        ergodic,
    })
}
