//! Exact real numbers of the form `a + b√d` with rational `a`, `b`.
//!
//! Floors, signs and distances to the nearest integer are decided exactly;
//! fractional parts used in trigonometric sums are truncated to
//! [`FRAC_BITS`] bits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exact::{parse_rational, ratio_to_f64, Rational};

/// Bits kept for fractional parts in fixed point.
pub const FRAC_BITS: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticReal {
    pub a: Rational,
    pub b: Rational,
    /// Positive non-square radicand; `1` when `b = 0`.
    pub d: u64,
}

impl Serialize for QuadraticReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("({})*sqrt({})", self.b, self.d)
        };
        if self.a.is_zero() {
            write!(f, "{root}")
        } else if root.starts_with('-') {
            write!(f, "{} {}", self.a, root.replacen('-', "- ", 1))
        } else {
            write!(f, "{} + {}", self.a, root)
        }
    }
}

fn is_square(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

fn floor_rational(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

impl QuadraticReal {
    pub fn rational(a: Rational) -> Self {
        QuadraticReal { a, b: Rational::zero(), d: 1 }
    }

    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if d == 0 || b.is_zero() {
            return Ok(Self::rational(a));
        }
        if is_square(d) {
            return Ok(Self::rational(a + b * Rational::from_integer(BigInt::from(d.sqrt()))));
        }
        Ok(QuadraticReal { a, b, d })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Parses sums of rationals (`3/7`, `0.25`) and radical terms
    /// (`sqrt(2)`, `3*sqrt(5)/2`, `sqrt5`). Named constants: `sqrt2m1`,
    /// `golden`, `goldenm1`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "sqrt2m1" => return Self::parse("sqrt(2)-1"),
            "golden" | "phi" => return Self::parse("1/2+sqrt(5)/2"),
            "goldenm1" | "invgolden" => return Self::parse("sqrt(5)/2-1/2"),
            _ => {}
        }
        if t.is_empty() {
            return Err(invalid("empty real"));
        }
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        let mut d: Option<u64> = None;
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0i32;
        let mut prev: Option<char> = None;
        for c in t.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let sign_pos = depth == 0 && (c == '+' || c == '-') && !matches!(prev, None | Some('*' | '/' | 'e' | 'E'));
            if sign_pos {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = c == '-';
            } else if depth == 0 && (c == '+' || c == '-') && prev.is_none() {
                neg = c == '-';
            } else {
                cur.push(c);
            }
            prev = Some(c);
        }
        terms.push((neg, cur));
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(invalid(format!("malformed real {s:?}")));
            }
            let (coef, rad) = parse_term(&term).ok_or_else(|| invalid(format!("cannot parse term {term:?} of {s:?}")))?;
            let coef = if neg { -coef } else { coef };
            match rad {
                None => a += coef,
                Some(r) if is_square(r) => a += coef * Rational::from_integer(BigInt::from(r.sqrt())),
                Some(r) => {
                    if d.is_some_and(|d0| d0 != r) {
                        return Err(invalid(format!("{s:?} mixes different radicands")));
                    }
                    d = Some(r);
                    b += coef;
                }
            }
        }
        Self::new(a, b, d.unwrap_or(1))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let n = Rational::from_integer(n.clone());
        QuadraticReal {
            a: self.a.clone() * n.clone(),
            b: self.b.clone() * n,
            d: self.d,
        }
    }

    pub fn sub_rational(&self, r: &Rational) -> Self {
        QuadraticReal {
            a: self.a.clone() - r,
            b: self.b.clone(),
            d: self.d,
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let a2 = self.a.clone() * self.a.clone();
        let b2d = self.b.clone() * self.b.clone() * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// `⌊x · 2^k⌋`.
    pub fn floor_scaled(&self, k: u32) -> BigInt {
        let scale = BigInt::one() << k;
        if self.b.is_zero() {
            return floor_rational(&(self.a.clone() * Rational::from_integer(scale)));
        }
        // x = (P + Q√d) / R with integers P, Q and R > 0
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom()) * &scale;
        let q = self.b.numer() * (&r / self.b.denom()) * &scale;
        // ⌊Q√d⌋ is exact from an integer square root since Q√d is irrational
        let root = (q.abs() * q.abs() * BigInt::from(self.d)).sqrt();
        let fq = if q.sign() == Sign::Minus { -root - 1 } else { root };
        (p + fq).div_floor(&r)
    }

    pub fn floor(&self) -> BigInt {
        self.floor_scaled(0)
    }

    /// Fractional part as a fixed-point fraction of `2^128`, truncated.
    pub fn frac_fixed(&self) -> u128 {
        let v = self.floor_scaled(FRAC_BITS);
        let m: BigInt = v.mod_floor(&(BigInt::one() << FRAC_BITS));
        m.to_u128().expect("reduced below 2^128")
    }

    /// `‖x‖ < ε`, decided exactly.
    pub fn dist_lt(&self, eps: &Rational) -> bool {
        let fl = Rational::from_integer(self.floor());
        let below = self.sub_rational(&(fl.clone() + eps));
        let above = self.sub_rational(&(fl + Rational::one() - eps));
        below.signum() == Ordering::Less || above.signum() == Ordering::Greater
    }

    /// `‖x‖` to about 2^-64.
    pub fn dist_f64(&self) -> f64 {
        fixed_dist(self.frac_fixed())
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

/// Distance from a fixed-point fraction to the nearest integer.
pub fn fixed_dist(t: u128) -> f64 {
    let d = t.min(t.wrapping_neg());
    (d >> 64) as f64 / 2f64.powi(64)
}

fn parse_term(t: &str) -> Option<(Rational, Option<u64>)> {
    let Some(pos) = t.find("sqrt") else {
        return Some((parse_rational(t)?, None));
    };
    let before = &t[..pos];
    let coef = if before.is_empty() {
        Rational::one()
    } else {
        parse_rational(before.strip_suffix('*')?)?
    };
    let rest = &t[pos + 4..];
    let (rad, after) = if let Some(r) = rest.strip_prefix('(') {
        let close = r.find(')')?;
        (&r[..close], &r[close + 1..])
    } else {
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        (&rest[..end], &rest[end..])
    };
    let d: u64 = rad.parse().ok()?;
    let coef = if after.is_empty() {
        coef
    } else {
        let q = parse_rational(after.strip_prefix('/')?)?;
        if q.is_zero() {
            return None;
        }
        coef / q
    };
    Some((coef, Some(d)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn parse_forms() {
        let x = QuadraticReal::parse("sqrt(2)-1").unwrap();
        assert_eq!(x.a, rat(-1, 1));
        assert_eq!(x.b, rat(1, 1));
        assert_eq!(x.d, 2);
        assert_eq!(QuadraticReal::parse("sqrt2m1").unwrap(), x);
        let g = QuadraticReal::parse("goldenm1").unwrap();
        assert!((g.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(QuadraticReal::parse("3*sqrt(5)/2").unwrap().b, rat(3, 2));
        assert!(QuadraticReal::parse("sqrt(4)").unwrap().is_rational());
        assert_eq!(QuadraticReal::parse("-1/3").unwrap().a, rat(-1, 3));
        assert_eq!(QuadraticReal::parse("0.25").unwrap().a, rat(1, 4));
        assert!(QuadraticReal::parse("sqrt(2)+sqrt(3)").is_err());
        assert!(QuadraticReal::parse("abc").is_err());
        assert!(QuadraticReal::parse("√2-1").is_err());
    }

    #[test]
    fn floors_match_floats() {
        let x = QuadraticReal::parse("sqrt(2)").unwrap();
        for n in -200i64..200 {
            let y = x.mul_int(&BigInt::from(n));
            assert_eq!(y.floor().to_i64().unwrap(), (n as f64 * 2f64.sqrt()).floor() as i64);
        }
        let y = QuadraticReal::parse("-sqrt(3)/7 + 2/3").unwrap();
        assert_eq!(y.floor(), BigInt::from(0));
    }

    #[test]
    fn frac_fixed_precision() {
        let x = QuadraticReal::parse("sqrt(2)").unwrap();
        let t = x.frac_fixed();
        let f = (t >> 64) as f64 / 2f64.powi(64);
        assert!((f - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(QuadraticReal::parse("1/2").unwrap().frac_fixed(), 1u128 << 127);
    }

    #[test]
    fn distances() {
        let half = QuadraticReal::parse("1/2").unwrap();
        assert!(!half.dist_lt(&rat(1, 2)));
        assert!(half.dist_lt(&rat(51, 100)));
        let x = QuadraticReal::parse("sqrt(2)").unwrap().mul_int(&BigInt::from(12));
        assert!(x.dist_lt(&rat(1, 20)));
        assert!((x.dist_f64() - (12.0 * 2f64.sqrt() - 17.0).abs()).abs() < 1e-12);
    }
}
