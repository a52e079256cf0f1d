//! Scalar abstraction shared by the float and exact-rational code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A field element usable as a probability mass.
pub trait Weight: Clone + Num + Signed + PartialOrd + Debug + Send + Sync + 'static {
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Weight for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Weight for BigRational {
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Converts a big rational to the nearest-ish f64, robust to huge numerators
/// and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.denom().bits() as i64 - r.numer().bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (r.numer() << (shift as usize)) / r.denom()
    } else {
        r.numer() / (r.denom() << ((-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Parses "a/b", "a" or a finite decimal like "0.25" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    let a: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(a))
}

pub type Matrix<W> = Vec<Vec<W>>;

pub fn identity<W: Weight>(n: usize) -> Matrix<W> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { W::one() } else { W::zero() }).collect())
        .collect()
}

pub fn mat_mul<W: Weight>(a: &Matrix<W>, b: &Matrix<W>) -> Matrix<W> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![W::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].clone() + aik.clone() * b[k][j].clone();
                }
            }
        }
    }
    out
}

pub fn mat_pow<W: Weight>(a: &Matrix<W>, mut e: u64) -> Matrix<W> {
    let mut result = identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// Row vector times matrix.
pub fn vec_mat<W: Weight>(v: &[W], a: &Matrix<W>) -> Vec<W> {
    let m = a.first().map_or(0, |r| r.len());
    let mut out = vec![W::zero(); m];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..m {
            if !a[i][j].is_zero() {
                out[j] = out[j].clone() + vi.clone() * a[i][j].clone();
            }
        }
    }
    out
}

/// Solves `a x = b` by Gaussian elimination with largest-magnitude pivoting.
/// Returns `None` when the system is singular.
pub fn solve_linear<W: Weight>(mut a: Matrix<W>, mut b: Vec<W>) -> Option<Vec<W>> {
    let n = a.len();
    for col in 0..n {
        let mut pivot = None;
        let mut best = W::zero();
        for (row, r) in a.iter().enumerate().skip(col) {
            let v = r[col].abs();
            if !v.is_zero() && (pivot.is_none() || v > best) {
                best = v;
                pivot = Some(row);
            }
        }
        let p = pivot?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = W::one() / a[col][col].clone();
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() * inv.clone();
            for k in col..n {
                if !a[col][k].is_zero() {
                    a[row][k] = a[row][k].clone() - factor.clone() * a[col][k].clone();
                }
            }
            b[row] = b[row].clone() - factor * b[col].clone();
        }
    }
    let mut x = vec![W::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            if !a[row][k].is_zero() {
                acc = acc - a[row][k].clone() * x[k].clone();
            }
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

pub fn is_one<W: Weight>(w: &W) -> bool {
    w.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn exact_solve() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        let b = vec![rat(3, 1), rat(5, 1)];
        let x = solve_linear(a, b).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigRational::new(BigInt::one(), BigInt::from(2).pow(2000));
        let v = ratio_to_f64(&(big.clone() * BigRational::from_integer(BigInt::from(2).pow(1999))));
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let a: Matrix<f64> = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let p = mat_pow(&a, 10);
        assert_eq!(p[0][0], 89.0);
    }
}
