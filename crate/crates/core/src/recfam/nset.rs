//! Hitting-time sets `N(U, V) = {n : T^n U ∩ V ≠ ∅}`.

use crate::error::{invalid, Result};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::pattern::contains_pattern;
use crate::symcore::subshift::Subshift;

use super::window::{IntegerWindowSet, Provenance};

/// `n ∈ N(U, V)`: some `y ∈ U` has `T^n y ∈ V`.
pub fn hits(x: &Subshift, u: &CylinderUnion, v: &CylinderUnion, n: i64) -> Result<bool> {
    contains_pattern(x, &[(0, u), (n, v)])
}

fn nonempty(x: &Subshift, u: &CylinderUnion, name: &str) -> Result<()> {
    if !contains_pattern(x, &[(0, u)])? {
        return Err(invalid(format!("{name} is empty in this subshift")));
    }
    Ok(())
}

/// `N(U, V) ∩ [-H, H]`, exact.
pub fn n_set(x: &Subshift, u: &CylinderUnion, v: &CylinderUnion, h: i64) -> Result<IntegerWindowSet> {
    if h < 0 {
        return Err(invalid("horizon must be nonnegative"));
    }
    x.caps().check_states("N(U,V) window", (2 * h + 1) as u128)?;
    nonempty(x, u, "U")?;
    nonempty(x, v, "V")?;
    IntegerWindowSet::from_fn(-h, h, Provenance::NSet, |n| hits(x, u, v, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::word::Word;

    fn cyl(x: &Subshift, w: &str) -> CylinderUnion {
        CylinderUnion::cylinder(x.ell(), 0, &Word::parse(w).unwrap().0)
    }

    #[test]
    fn full_shift_everything() {
        let x = Subshift::full(2).unwrap();
        let s = n_set(&x, &cyl(&x, "0"), &cyl(&x, "0"), 5).unwrap();
        assert_eq!(s.len(), 11);
    }

    #[test]
    fn period_two_odds() {
        let x = Subshift::period_two();
        let s = n_set(&x, &cyl(&x, "0"), &cyl(&x, "1"), 9).unwrap();
        assert!((-9..=9).all(|n| s.contains(n) == (n % 2 != 0)));
    }

    #[test]
    fn golden_mean_ones() {
        let x = Subshift::golden_mean();
        let s = n_set(&x, &cyl(&x, "1"), &cyl(&x, "1"), 10).unwrap();
        let expect: Vec<i64> = (-10..=10).filter(|n: &i64| n.abs() != 1).collect();
        assert_eq!(s.members(), expect);
    }

    #[test]
    fn empty_cylinder_rejected() {
        let x = Subshift::golden_mean();
        assert!(n_set(&x, &cyl(&x, "11"), &cyl(&x, "1"), 3).is_err());
        let e = CylinderUnion::empty(2);
        assert!(n_set(&x, &e, &cyl(&x, "1"), 3).is_err());
    }
}
