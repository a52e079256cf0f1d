//! Empirical measures along a schedule of good points.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::symcore::cover::CoverSpec;
use crate::symcore::subshift::Subshift;

use super::empirical::{empirical_measure, EmpiricalMeasure};
use super::goodpoint::{find_good_point, GoodPointCertificate, GoodPointOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainStage {
    pub k: usize,
    pub n: usize,
    pub certificate: GoodPointCertificate,
    pub measure: EmpiricalMeasure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainReport {
    pub h_top: f64,
    pub k_max: usize,
    pub stages: Vec<AttainStage>,
    /// `(partition, H_K(ω)/K)` at the last stage.
    pub estimates: Vec<(String, f64)>,
    pub min_estimate: f64,
    pub tol: f64,
    /// Every estimate is at least `h_top - tol`.
    pub certified: bool,
}

/// Runs [`find_good_point`] for each `(K, N_K)` of an increasing schedule and
/// records the empirical measure of each point.
pub fn attain_cover_entropy(
    x: &Subshift,
    u: &CoverSpec,
    schedule: &[(usize, usize)],
    opts: &GoodPointOptions,
    tol: f64,
) -> Result<AttainReport> {
    if schedule.is_empty() {
        return Err(invalid("empty schedule"));
    }
    if schedule.windows(2).any(|p| p[1].0 < p[0].0 || p[1].1 <= p[0].1) {
        return Err(invalid("the schedule must increase"));
    }
    let mut stages = Vec::new();
    for &(k, n) in schedule {
        let certificate = find_good_point(x, u, k, n, opts)?;
        let measure = empirical_measure(x, &certificate.point, n, k)?;
        stages.push(AttainStage { k, n, certificate, measure });
    }
    let last = &stages.last().unwrap().certificate;
    let k_max = last.k_max;
    let estimates: Vec<(String, f64)> = last
        .family
        .iter()
        .zip(&last.bounds)
        .map(|(label, b)| (label.clone(), b[k_max - 1]))
        .collect();
    let min_estimate = estimates.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let h_top = last.h;
    Ok(AttainReport {
        h_top,
        k_max,
        stages,
        estimates,
        min_estimate,
        tol,
        certified: min_estimate >= h_top - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entrolab::markov::MarkovMeasure;

    #[test]
    fn full_shift_attains_log_two() {
        let x = Subshift::full(2).unwrap();
        let u = CoverSpec::generating(&x).unwrap();
        let r = attain_cover_entropy(&x, &u, &[(1, 64), (2, 256), (3, 1024)], &GoodPointOptions::default(), 0.05)
            .unwrap();
        assert!(r.certified, "{}", r.min_estimate);
        let m = &r.stages[2].measure;
        assert!((m.frequency_f64(&[0, 0, 0]) - 0.125).abs() < 0.05);
    }

    #[test]
    fn golden_mean_tracks_parry() {
        let x = Subshift::golden_mean();
        let u = CoverSpec::generating(&x).unwrap();
        let r = attain_cover_entropy(&x, &u, &[(2, 256), (4, 2048)], &GoodPointOptions::default(), 0.05).unwrap();
        assert!(r.certified);
        let parry = MarkovMeasure::parry(&x).unwrap();
        let m = &r.stages[1].measure;
        for (w, _) in &m.counts {
            assert!((m.frequency_f64(w) - parry.measure_f64(w)).abs() < 0.05);
        }
    }

    #[test]
    fn trivial_cover() {
        let x = Subshift::full(2).unwrap();
        let r = attain_cover_entropy(&x, &CoverSpec::trivial(&x), &[(1, 16)], &GoodPointOptions::default(), 0.05)
            .unwrap();
        assert_eq!(r.h_top, 0.0);
        assert!(r.certified);
    }
}
