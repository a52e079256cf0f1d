//! Tower descriptions and first-return profiles.

use serde::Serialize;

use crate::entrolab::markov::MarkovMeasure;
use crate::error::{invalid, Result};
use crate::exact::{ratio_to_f64, Rational};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;

use super::markers::ReturnChain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerKind {
    /// Kakutani skyscraper over a marker base; heights are return times.
    Skyscraper,
    /// Rohlin tower `B, TB, …, T^{n-1}B` inside a skyscraper.
    Rohlin,
    /// K-R tower with heights `N` and `N + 1`.
    TwoHeight,
    /// K-R tower whose base lies in the base of a two-height tower.
    Nested,
}

/// One column: a height and the mass of its base piece when known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub height: usize,
    pub base_piece: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_mass: Option<String>,
}

/// A tower over a marker base. The cylinder set `marker_base` is the set of
/// points at which a marker occurrence ends; the tower base itself is the
/// set described by `base_rule`, defined from marker occurrences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerDescription {
    pub kind: TowerKind,
    pub markers: Vec<Word>,
    pub marker_base: CylinderUnion,
    pub base_rule: String,
    pub columns: Vec<Column>,
    pub min_height: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_height: Option<usize>,
    pub resolution: usize,
    /// Levels partition the space (K-R property) off a set that is null for
    /// every invariant measure charging the marker base.
    pub exact: bool,
    /// `N` for two-height towers, `n` for Rohlin and nested towers.
    pub parameter: usize,
    /// Minimum return time of the marker base.
    pub marker_gap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<Box<TowerDescription>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux_marker: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
}

impl TowerDescription {
    pub fn heights(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.height).collect()
    }

    pub fn marker_len(&self) -> usize {
        self.markers.first().map_or(0, |w| w.len())
    }
}

/// Cylinder set of points at which some marker occurrence ends.
pub fn marker_base(ell: usize, markers: &[Word]) -> Result<CylinderUnion> {
    let l = markers.first().map_or(0, |w| w.len());
    if l == 0 || markers.iter().any(|w| w.len() != l) {
        return Err(invalid("markers must be nonempty words of a common length"));
    }
    Ok(CylinderUnion::from_words(ell, 1 - l as i64, l, markers.iter().map(|w| w.0.clone())))
}

/// Masses `μ(B_ℓ) = μ{x ∈ B : r_B(x) = ℓ}` for `ℓ ≤ ℓ_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnTimeProfile {
    pub base: String,
    pub base_mass: f64,
    pub masses: Vec<(usize, f64)>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_masses: Option<Vec<(usize, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_residual: Option<String>,
    /// `Σ μ(B_ℓ) + residual = μ(B)` holds exactly (rational data only).
    pub sums_exactly: Option<bool>,
    pub l_max: usize,
}

impl ReturnTimeProfile {
    /// Heights carrying positive mass.
    pub fn support(&self) -> Vec<usize> {
        self.masses.iter().filter(|(_, m)| *m > 0.0).map(|&(l, _)| l).collect()
    }
}

/// Exact first-return law of a cylinder union under a Markov measure, by
/// the transfer matrix of the product of the chain with the occurrence
/// automaton of the cylinder words.
pub fn return_times(x: &Subshift, b: &CylinderUnion, mu: &MarkovMeasure, l_max: usize) -> Result<ReturnTimeProfile> {
    mu.validate_on(x)?;
    if b.alphabet() != x.ell() {
        return Err(invalid("base alphabet does not match the subshift"));
    }
    if b.is_empty() {
        return Err(invalid("the base is empty"));
    }
    if b.is_whole() {
        let mut masses = vec![(1, 1.0)];
        masses.extend((2..=l_max).map(|l| (l, 0.0)));
        return Ok(ReturnTimeProfile {
            base: b.to_string(),
            base_mass: 1.0,
            masses,
            residual: 0.0,
            exact_masses: None,
            exact_residual: None,
            sums_exactly: None,
            l_max,
        });
    }
    let words: Vec<Vec<u8>> = b.words().iter().cloned().collect();
    let cap = x.caps().states;
    let fchain = ReturnChain::<f64>::new(mu, &words, cap)?.expect("float data");
    let base_mass = fchain.base_mass();
    if base_mass <= 0.0 {
        return Err(invalid(format!("{} gives the base measure zero", mu.label())));
    }
    let (fm, fres) = fchain.masses(l_max);
    let mut profile = ReturnTimeProfile {
        base: b.to_string(),
        base_mass,
        masses: fm.into_iter().enumerate().map(|(i, m)| (i + 1, m)).collect(),
        residual: fres,
        exact_masses: None,
        exact_residual: None,
        sums_exactly: None,
        l_max,
    };
    if let Some(rc) = ReturnChain::<Rational>::new(mu, &words, cap)? {
        let (m, res) = rc.masses(l_max);
        let total: Rational = m.iter().cloned().sum::<Rational>() + res.clone();
        profile.sums_exactly = Some(total == rc.base_mass());
        profile.masses = m.iter().enumerate().map(|(i, p)| (i + 1, ratio_to_f64(p))).collect();
        profile.residual = ratio_to_f64(&res);
        profile.exact_masses = Some(m.iter().enumerate().map(|(i, p)| (i + 1, p.to_string())).collect());
        profile.exact_residual = Some(res.to_string());
    }
    Ok(profile)
}

/// Kakutani skyscraper over the marker base, with column masses up to
/// `l_max` under `mu`.
pub fn skyscraper(x: &Subshift, markers: &[Word], mu: &MarkovMeasure, l_max: usize) -> Result<TowerDescription> {
    let base = marker_base(x.ell(), markers)?;
    let profile = return_times(x, &base, mu, l_max)?;
    let words: Vec<Vec<u8>> = markers.iter().map(|w| w.0.clone()).collect();
    let gap = super::markers::min_return(x, &words, l_max)?.unwrap_or(l_max + 1);
    let exact = profile.exact_masses.clone();
    let columns = profile
        .masses
        .iter()
        .enumerate()
        .filter(|(_, (_, m))| *m > 0.0)
        .map(|(i, &(l, m))| Column {
            height: l,
            base_piece: format!("marker base with return time {l}"),
            mass: Some(m),
            exact_mass: exact.as_ref().map(|e| e[i].1.clone()),
        })
        .collect();
    Ok(TowerDescription {
        kind: TowerKind::Skyscraper,
        markers: markers.to_vec(),
        marker_base: base,
        base_rule: "a marker occurrence ends at 0".into(),
        columns,
        min_height: gap,
        max_height: None,
        resolution: markers[0].len(),
        exact: false,
        parameter: 0,
        marker_gap: gap,
        outer: None,
        aux_marker: None,
        block_size: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn examples() {
        let full = Subshift::full(2).unwrap();
        let b = CylinderUnion::cylinder(2, 0, &[0]);
        let p = return_times(&full, &b, &MarkovMeasure::uniform_bernoulli(2), 8).unwrap();
        let e = p.exact_masses.as_ref().unwrap();
        for (l, m) in e {
            // μ(B_ℓ)/μ(B) = 2^{-ℓ}
            assert_eq!(crate::exact::parse_rational(m).unwrap(), rat(1, 2) * rat(1, 1 << l));
        }
        assert_eq!(p.sums_exactly, Some(true));

        let p2 = Subshift::period_two();
        let mu = MarkovMeasure::uniform_edges(&p2).unwrap();
        let prof = return_times(&p2, &b, &mu, 6).unwrap();
        assert_eq!(prof.support(), vec![2]);

        let gm = Subshift::golden_mean();
        let parry = MarkovMeasure::parry(&gm).unwrap();
        let one = CylinderUnion::cylinder(2, 0, &[1]);
        let prof = return_times(&gm, &one, &parry, 10).unwrap();
        assert_eq!(prof.masses[0].1, 0.0);
        assert!(prof.masses[1].1 > 0.0);
    }

    #[test]
    fn zero_mass_base_rejected() {
        let gm = Subshift::golden_mean();
        let parry = MarkovMeasure::parry(&gm).unwrap();
        let b = CylinderUnion::cylinder(2, 0, &[1, 1]);
        assert!(return_times(&gm, &b, &parry, 4).is_err());
    }
}
