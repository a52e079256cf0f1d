//! Rohlin towers `B, TB, …, T^{n-1}B` that cover all but `δ` of every
//! supplied aperiodic Markov measure at once.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::entrolab::markov::MarkovMeasure;
use crate::error::{invalid, Error, Result};
use crate::exact::{rat, ratio_to_f64, Rational};
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;
use crate::towers::kr::require_aperiodic;
use crate::towers::markers::{lex_first_word, min_return, ReturnChain};
use crate::towers::tower::{marker_base, Column, TowerDescription, TowerKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RohlinCoverage {
    pub measure: String,
    /// `μ(B ∪ TB ∪ … ∪ T^{n-1}B)`.
    pub coverage: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub kac: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RohlinReport {
    pub tower: TowerDescription,
    pub n: usize,
    pub delta: String,
    /// Number of pairwise disjoint iterates of the marker base.
    pub iterates: usize,
    pub coverages: Vec<RohlinCoverage>,
    /// `B, TB, …, T^{n-1}B` are pairwise disjoint.
    pub disjoint: bool,
}

/// Checks `B ∩ T^j B = ∅` for `0 < j < n` when `B` holds the levels
/// `t ≡ 0 (mod n)` with `t + n ≤ h` of columns of height `h ≥ iterates`.
/// Membership depends on a height only through its residue mod `n` and the
/// roof, so consecutive columns with heights in `[iterates, iterates + 2n)`
/// exhaust the cases.
pub fn levels_disjoint(n: usize, iterates: usize) -> bool {
    let member = |s: usize, h: usize| s % n == 0 && s + n <= h;
    let hs = iterates..iterates + 2 * n;
    for h1 in hs.clone() {
        for h2 in hs.clone() {
            for t in 0..h1 {
                if !member(t, h1) {
                    continue;
                }
                for j in 1..n {
                    let hit = if t + j < h1 { member(t + j, h1) } else { member(t + j - h1, h2) };
                    if hit {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn markers_for(
    x: &Subshift,
    comps: &[MarkovMeasure],
    iterates: usize,
    resolution: usize,
) -> Result<Vec<Vec<u8>>> {
    let cap = x.caps().search_nodes;
    'len: for len in iterates..=resolution {
        let mut markers: Vec<Vec<u8>> = Vec::new();
        for comp in comps {
            let charged = markers.iter().any(|m| comp.measure_f64(m) > 0.0);
            if charged {
                continue;
            }
            let found = lex_first_word(comp, len, cap, |w| {
                let mut all = markers.clone();
                all.push(w.to_vec());
                Ok(min_return(x, &all, iterates - 1)?.is_none())
            })?;
            match found {
                Some(w) => markers.push(w),
                None => continue 'len,
            }
        }
        return Ok(markers);
    }
    Err(Error::ResolutionTooCoarse(format!(
        "no markers with {iterates} disjoint iterates among words of length at most {resolution}"
    )))
}

/// Builds the tower over a marker skyscraper whose base has
/// `N = ⌈n/δ⌉` disjoint iterates: `B` is every `n`-th level below the roof.
pub fn universal_rohlin(
    x: &Subshift,
    n: usize,
    delta: &Rational,
    measures: &[MarkovMeasure],
    resolution: Option<usize>,
) -> Result<RohlinReport> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if *delta <= rat(0, 1) || *delta >= rat(1, 1) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    if measures.is_empty() {
        return Err(invalid("no measures supplied"));
    }
    let refs: Vec<&MarkovMeasure> = measures.iter().collect();
    require_aperiodic(x, &refs)?;
    let iterates = (rat(n as i64, 1) / delta.clone())
        .ceil()
        .to_integer()
        .to_usize()
        .ok_or_else(|| invalid("n/delta is too large"))?;
    let resolution = resolution.unwrap_or(2 * iterates + 16);
    let mut comps = Vec::new();
    for mu in measures {
        comps.extend(mu.ergodic_decomposition()?.into_iter().map(|(_, c)| c));
    }
    let markers = markers_for(x, &comps, iterates, resolution)?;
    let gap = min_return(x, &markers, 2 * resolution)?.unwrap_or(2 * resolution + 1);
    debug_assert!(gap >= iterates);
    let cap = x.caps().states;
    let mut coverages = Vec::new();
    for mu in measures {
        let fchain = ReturnChain::<f64>::new(mu, &markers, cap)?.expect("float data");
        let kac = fchain.kac_mass()?;
        let mut cov = fchain.block_coverage(n)?;
        let mut exact = None;
        if let Some(rc) = ReturnChain::<Rational>::new(mu, &markers, cap)? {
            let k = rc.kac_mass()?;
            if k != rat(1, 1) {
                return Err(Error::Precondition(format!("part of {} never visits the marker base", mu.label())));
            }
            let c = rc.block_coverage(n)?;
            cov = ratio_to_f64(&c);
            exact = Some(c);
        } else if kac < 1.0 - fchain.kac_tolerance() {
            return Err(Error::Precondition(format!("part of {} never visits the marker base", mu.label())));
        }
        let bound = rat(1, 1) - delta.clone();
        let holds = match &exact {
            Some(c) => *c > bound,
            None => cov > ratio_to_f64(&bound),
        };
        assert!(holds, "Rohlin coverage {cov} not above 1 - delta");
        coverages.push(RohlinCoverage {
            measure: mu.label().to_string(),
            coverage: cov,
            exact: exact.map(|c| c.to_string()),
            kac,
            holds,
        });
    }
    let disjoint = levels_disjoint(n, gap);
    assert!(disjoint, "tower levels intersect");
    let words: Vec<Word> = markers.into_iter().map(Word).collect();
    let l = words[0].len();
    let tower = TowerDescription {
        kind: TowerKind::Rohlin,
        marker_base: marker_base(x.ell(), &words)?,
        markers: words,
        base_rule: format!(
            "t levels above the last marker end, with t divisible by {n} and t + {n} at most the column height"
        ),
        columns: vec![Column {
            height: n,
            base_piece: "B".into(),
            mass: Some(coverages[0].coverage / n as f64),
            exact_mass: coverages[0]
                .exact
                .as_ref()
                .map(|c| (crate::exact::parse_rational(c).unwrap() / rat(n as i64, 1)).to_string()),
        }],
        min_height: n,
        max_height: Some(n),
        resolution: l,
        exact: false,
        parameter: n,
        marker_gap: gap,
        outer: None,
        aux_marker: None,
        block_size: None,
    };
    Ok(RohlinReport {
        tower,
        n,
        delta: delta.to_string(),
        iterates,
        coverages,
        disjoint,
    })
}
