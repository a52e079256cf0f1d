//! Bohr neighbourhoods `{n : max_j ‖nλ_j‖ < ε}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Result};
use crate::exact::Rational;

use super::real::{QuadraticReal, FRAC_BITS};
use super::window::{IntegerWindowSet, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BohrSpec {
    pub freqs: Vec<QuadraticReal>,
    #[serde(serialize_with = "ser_rational")]
    pub eps: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl BohrSpec {
    pub fn new(freqs: Vec<QuadraticReal>, eps: Rational) -> Result<Self> {
        if freqs.is_empty() {
            return Err(invalid("a Bohr set needs at least one frequency"));
        }
        if eps <= Rational::zero() {
            return Err(invalid("epsilon must be positive"));
        }
        Ok(BohrSpec { freqs, eps })
    }

    /// Membership of a single integer, exact.
    pub fn contains(&self, n: i64) -> bool {
        let n = BigInt::from(n);
        self.freqs.iter().all(|l| l.mul_int(&n).dist_lt(&self.eps))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BohrReport {
    pub spec: BohrSpec,
    pub horizon: i64,
    /// Distances are decided by exact sign tests; this is the fixed-point
    /// width used when they are printed.
    pub precision_bits: u32,
    pub set: IntegerWindowSet,
}

/// `V(λ_1, …, λ_k; ε) ∩ [-H, H]`.
pub fn bohr_membership(spec: &BohrSpec, h: i64, caps: &Caps) -> Result<BohrReport> {
    if h < 0 {
        return Err(invalid("horizon must be nonnegative"));
    }
    caps.check_states("Bohr window", (2 * h + 1) as u128)?;
    let set = IntegerWindowSet::from_fn(-h, h, Provenance::Bohr, |n| Ok(spec.contains(n)))?;
    Ok(BohrReport {
        spec: spec.clone(),
        horizon: h,
        precision_bits: FRAC_BITS,
        set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn spec(s: &str, eps: Rational) -> BohrSpec {
        BohrSpec::new(vec![QuadraticReal::parse(s).unwrap()], eps).unwrap()
    }

    #[test]
    fn half_gives_evens() {
        let r = bohr_membership(&spec("1/2", rat(1, 10)), 50, &Caps::default()).unwrap();
        assert!((-50..=50).all(|n| r.set.contains(n) == (n % 2 == 0)));
    }

    #[test]
    fn large_epsilon_is_everything() {
        let r = bohr_membership(&spec("sqrt(3)", rat(3, 5)), 30, &Caps::default()).unwrap();
        assert_eq!(r.set.len(), 61);
    }

    #[test]
    fn pell_denominators() {
        let r = bohr_membership(&spec("sqrt2m1", rat(1, 20)), 10_000, &Caps::default()).unwrap();
        for n in [12, 29, 70, 169, 408, 985, 2378, 5741] {
            assert!(r.set.contains(n) && r.set.contains(-n), "{n}");
        }
        // first positive members
        let first: Vec<i64> = r.set.members().into_iter().filter(|&n| n > 0).take(3).collect();
        assert_eq!(first, vec![12, 17, 29]);
        // float oracle away from the boundary
        for n in 1..=2000i64 {
            let x = n as f64 * (2f64.sqrt() - 1.0);
            let d = (x - x.round()).abs();
            if (d - 0.05).abs() > 1e-9 {
                assert_eq!(r.set.contains(n), d < 0.05, "{n}");
            }
        }
    }

    #[test]
    fn symmetric() {
        let r = bohr_membership(&spec("goldenm1", rat(1, 7)), 500, &Caps::default()).unwrap();
        assert_eq!(r.set.negated(), r.set);
    }
}
