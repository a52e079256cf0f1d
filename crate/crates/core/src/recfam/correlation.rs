//! Return masses `μ(B ∩ T^{-t} B)` and centred matrix coefficients of
//! cylinder indicators under Markov measures.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::entrolab::markov::{ChainWeight, MarkovMeasure};
use crate::error::{invalid, Error, Result};
use crate::exact::{ratio_to_f64, Rational, Weight};
use crate::symcore::cylinder::CylinderUnion;

use super::weyl::SequenceSpec;

/// `μ(B ∩ T^{-t} B)` for each `t` in increasing order.
fn pair_masses<W: ChainWeight>(mu: &MarkovMeasure, b: &CylinderUnion, times: &[u64]) -> Option<Vec<W>> {
    let w = b.width();
    let words: Vec<&Vec<u8>> = b.words().iter().collect();
    let mut out = vec![W::zero(); times.len()];
    for u in &words {
        let mut v = mu.after_word::<W>(u)?;
        let mut at = w as u64;
        for (k, &t) in times.iter().enumerate() {
            if t < w as u64 {
                let t = t as usize;
                for z in &words {
                    if u[t..] == z[..w - t] {
                        let mut joined = u.to_vec();
                        joined.extend_from_slice(&z[w - t..]);
                        out[k] = out[k].clone() + mu.measure::<W>(&joined)?;
                    }
                }
                continue;
            }
            while at < t {
                v = mu.step(&v)?;
                at += 1;
            }
            for z in &words {
                let r = mu.read(&v, z)?;
                out[k] = r.into_iter().fold(out[k].clone(), |a, x| a + x);
            }
        }
    }
    Some(out)
}

fn union_mass<W: ChainWeight>(mu: &MarkovMeasure, b: &CylinderUnion) -> Option<W> {
    b.words().iter().try_fold(W::zero(), |a, w| Some(a + mu.measure::<W>(w)?))
}

/// Irreducible on the support of `π` and aperiodic.
pub fn is_mixing_chain(mu: &MarkovMeasure) -> bool {
    let n = mu.states().len();
    let live: Vec<bool> = mu.pi().iter().map(|&p| p > 0.0).collect();
    let succ = |i: usize| {
        (0..mu.ell()).filter_map(move |s| {
            if mu.trans()[i][s] > 0.0 {
                mu.next_state(i, s as u8)
            } else {
                None
            }
        })
    };
    let Some(root) = live.iter().position(|&l| l) else {
        return false;
    };
    let mut level = vec![-1i64; n];
    level[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut g = 0i64;
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if level[w] < 0 {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                g = g.gcd(&(level[v] + 1 - level[w]));
            }
        }
    }
    if (0..n).any(|i| live[i] != (level[i] >= 0)) {
        return false;
    }
    // every live state must reach the root again
    let reaches_root = (0..n).filter(|&i| live[i]).all(|i| {
        let mut seen = vec![false; n];
        let mut stack = vec![i];
        seen[i] = true;
        while let Some(v) = stack.pop() {
            if v == root {
                return true;
            }
            for w in succ(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    });
    reaches_root && g.abs() == 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnMass {
    pub j: usize,
    pub s_j: u64,
    pub mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// `(1/j) Σ_{i≤j} μ(B ∩ T^{-s_i} B)`.
    pub running_average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnMassReport {
    pub measure: String,
    pub mu_b: f64,
    pub mu_b_squared: f64,
    pub mixing: bool,
    pub rows: Vec<ReturnMass>,
    /// First `j` with a positive mass.
    pub first_positive: Option<usize>,
}

fn check_alphabet(mu: &MarkovMeasure, b: &CylinderUnion) -> Result<()> {
    if b.alphabet() != mu.ell() {
        return Err(invalid("cylinder and measure use different alphabets"));
    }
    Ok(())
}

fn time_list(s: &SequenceSpec, j_max: usize, cap: u64) -> Result<Vec<u64>> {
    s.validate()?;
    (1..=j_max)
        .map(|j| {
            let t = s.term(j).ok_or_else(|| invalid(format!("sequence has fewer than {j_max} terms")))?;
            let t = t.to_u64().ok_or_else(|| invalid("return times must be nonnegative"))?;
            if t > cap {
                return Err(Error::cap("return time", cap as u128, t as u128));
            }
            Ok(t)
        })
        .collect()
}

/// `μ(B ∩ T^{-s_j} B)` for `j ≤ j_max`, exact when the measure is rational.
pub fn poincare_return_masses(
    mu: &MarkovMeasure,
    b: &CylinderUnion,
    s: &SequenceSpec,
    j_max: usize,
    cap: u64,
) -> Result<ReturnMassReport> {
    check_alphabet(mu, b)?;
    let mu_b = union_mass::<f64>(mu, b).unwrap();
    if mu_b <= 0.0 {
        return Err(invalid("B has measure zero"));
    }
    let times = time_list(s, j_max, cap)?;
    let exact: Option<Vec<Rational>> = pair_masses::<Rational>(mu, b, &times);
    let masses: Vec<f64> = match &exact {
        Some(e) => e.iter().map(ratio_to_f64).collect(),
        None => pair_masses::<f64>(mu, b, &times).unwrap(),
    };
    let mut rows = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for (i, (&t, &m)) in times.iter().zip(&masses).enumerate() {
        acc += m;
        rows.push(ReturnMass {
            j: i + 1,
            s_j: t,
            mass: m,
            exact: exact.as_ref().map(|e| e[i].to_string()),
            running_average: acc / (i + 1) as f64,
        });
    }
    let first_positive = match &exact {
        Some(e) => e.iter().position(|m| *m > Rational::zero()),
        None => masses.iter().position(|&m| m > 0.0),
    }
    .map(|i| i + 1);
    let mixing = is_mixing_chain(mu);
    if mixing && j_max > 0 {
        assert!(first_positive.is_some(), "no positive return mass for a mixing chain");
    }
    Ok(ReturnMassReport {
        measure: mu.label().to_string(),
        mu_b,
        mu_b_squared: mu_b * mu_b,
        mixing,
        rows,
        first_positive,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixCoefficients {
    pub measure: String,
    /// `μ(F)`.
    pub p: f64,
    /// `φ(n) = (μ(F ∩ T^{-n}F) - p²) / (p(1 - p))` for `0 ≤ n ≤ n_max`.
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
    pub tail_start: usize,
    /// `max φ(n)` over `n ≥ tail_start`.
    pub limsup: f64,
    /// The tail comes within `rigidity_tol` of 1.
    pub rigid: bool,
    pub rigidity_tol: f64,
}

/// Centred, normalised autocorrelation of the indicator of `F`.
pub fn matrix_coefficient(mu: &MarkovMeasure, f: &CylinderUnion, n_max: usize) -> Result<MatrixCoefficients> {
    check_alphabet(mu, f)?;
    let times: Vec<u64> = (0..=n_max as u64).collect();
    let norm = |m: Rational, p: &Rational| {
        let var = p.clone() * (Rational::from_ratio(1, 1) - p.clone());
        (m - p.clone() * p.clone()) / var
    };
    let (values, exact, p) = match union_mass::<Rational>(mu, f) {
        Some(p) => {
            if p.is_zero() || p == Rational::from_ratio(1, 1) {
                return Err(invalid("F has measure 0 or 1"));
            }
            let m = pair_masses::<Rational>(mu, f, &times).unwrap();
            let e: Vec<Rational> = m.into_iter().map(|x| norm(x, &p)).collect();
            (e.iter().map(ratio_to_f64).collect::<Vec<_>>(), Some(e), ratio_to_f64(&p))
        }
        None => {
            let p = union_mass::<f64>(mu, f).unwrap();
            if p <= 1e-15 || p >= 1.0 - 1e-15 {
                return Err(invalid("F has measure 0 or 1"));
            }
            let m = pair_masses::<f64>(mu, f, &times).unwrap();
            (m.into_iter().map(|x| (x - p * p) / (p * (1.0 - p))).collect(), None, p)
        }
    };
    let tail_start = (n_max / 2).max(1).min(n_max);
    let limsup = values[tail_start..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rigidity_tol = 1e-6;
    Ok(MatrixCoefficients {
        measure: mu.label().to_string(),
        p,
        values,
        exact: exact.map(|e| e.iter().map(|x| x.to_string()).collect()),
        tail_start,
        limsup,
        rigid: limsup >= 1.0 - rigidity_tol,
        rigidity_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::symcore::subshift::Subshift;

    fn cyl(ell: usize, w: &[u8]) -> CylinderUnion {
        CylinderUnion::cylinder(ell, 0, w)
    }

    fn period_two_chain() -> MarkovMeasure {
        MarkovMeasure::uniform_edges(&Subshift::period_two()).unwrap()
    }

    #[test]
    fn bernoulli_independence() {
        let mu = MarkovMeasure::uniform_bernoulli(2);
        let r = poincare_return_masses(&mu, &cyl(2, &[0]), &SequenceSpec::Squares, 10, 1 << 20).unwrap();
        assert!(r.rows.iter().all(|m| m.exact.as_deref() == Some("1/4")));
        assert!(r.mixing);
        let c = matrix_coefficient(&mu, &cyl(2, &[0]), 12).unwrap();
        assert_eq!(c.values[0], 1.0);
        assert!(c.values[1..].iter().all(|&v| v == 0.0));
        assert!(!c.rigid);
    }

    #[test]
    fn period_two_returns() {
        let mu = period_two_chain();
        let s = SequenceSpec::Arithmetic { start: 2, step: 2 };
        let r = poincare_return_masses(&mu, &cyl(2, &[0]), &s, 8, 1 << 20).unwrap();
        assert!(r.rows.iter().all(|m| m.exact.as_deref() == Some("1/2")));
        assert!(!r.mixing);
        let c = matrix_coefficient(&mu, &cyl(2, &[0]), 10).unwrap();
        for (n, &v) in c.values.iter().enumerate() {
            assert_eq!(v, if n % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert!(c.rigid);
    }

    #[test]
    fn golden_mean_decay() {
        let x = Subshift::golden_mean();
        let mu = MarkovMeasure::parry(&x).unwrap();
        let r = poincare_return_masses(&mu, &cyl(2, &[1]), &SequenceSpec::Squares, 20, 1 << 20).unwrap();
        let p = r.mu_b;
        assert!((r.rows.last().unwrap().mass - p * p).abs() < 1e-9);
        assert_eq!(r.first_positive, Some(2));
        let c = matrix_coefficient(&mu, &cyl(2, &[1]), 30).unwrap();
        // second eigenvalue of the Parry chain is -1/φ²
        let lam = -1.0 / ((1.0 + 5f64.sqrt()) / 2.0).powi(2);
        for (n, &v) in c.values.iter().enumerate() {
            assert!((v - lam.powi(n as i32)).abs() < 1e-9, "{n}: {v}");
        }
        assert!(c.values[30].abs() < 0.1);
    }

    #[test]
    fn overlapping_times_match_words() {
        // B = [01] at width 2; t = 1 needs the word 0101's prefix 010 to avoid overlap
        let mu = MarkovMeasure::bernoulli(&[rat(1, 3), rat(2, 3)]).unwrap();
        let b = CylinderUnion::from_words(2, 0, 2, [vec![0, 1], vec![1, 1]]);
        let m = pair_masses::<Rational>(&mu, &b, &[0, 1, 2, 3]).unwrap();
        let oracle = |t: usize| -> Rational {
            let mut total = rat(0, 1);
            for y in 0..16u8 {
                let w: Vec<u8> = (0..4).map(|i| (y >> (3 - i)) & 1).collect();
                let inb = |s: &[u8]| s[1] == 1;
                if t + 2 <= 4 && inb(&w[0..2]) && inb(&w[t..t + 2]) {
                    total += w.iter().map(|&s| if s == 0 { rat(1, 3) } else { rat(2, 3) }).product::<Rational>();
                }
            }
            total
        };
        for t in 0..=2 {
            assert_eq!(m[t], oracle(t), "t = {t}");
        }
        assert_eq!(m[3], rat(4, 9));
    }

    #[test]
    fn trivial_indicator_rejected() {
        let mu = MarkovMeasure::uniform_bernoulli(2);
        assert!(matrix_coefficient(&mu, &CylinderUnion::whole(2), 3).is_err());
    }
}
