//! Exponential sums along integer sequences and recurrence of circle
//! rotations along them.

use num_bigint::BigInt;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Result};
use crate::exact::Rational;

use super::real::{fixed_dist, QuadraticReal, FRAC_BITS};

/// A strictly increasing sequence `s_1 < s_2 < …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `s_k = k²`.
    Squares,
    /// `s_k = (2k - 1)²`.
    OddSquares,
    /// `s_k = start + (k - 1) step`.
    Arithmetic { start: i64, step: i64 },
    /// `s_k = base^k`.
    Lacunary { base: u32 },
    Explicit { terms: Vec<i64> },
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Arithmetic { step, .. } if *step <= 0 => Err(invalid("arithmetic step must be positive")),
            SequenceSpec::Lacunary { base } if *base < 2 => Err(invalid("lacunary base must be at least 2")),
            SequenceSpec::Explicit { terms } if terms.windows(2).any(|p| p[0] >= p[1]) => {
                Err(invalid("explicit sequence must be strictly increasing"))
            }
            _ => Ok(()),
        }
    }

    /// Number of available terms, if finite.
    pub fn len(&self) -> Option<usize> {
        match self {
            SequenceSpec::Explicit { terms } => Some(terms.len()),
            _ => None,
        }
    }

    /// `s_k` for `k ≥ 1`; `None` past the end of a finite list.
    pub fn term(&self, k: usize) -> Option<BigInt> {
        let kk = BigInt::from(k);
        match self {
            SequenceSpec::Squares => Some(&kk * &kk),
            SequenceSpec::OddSquares => {
                let o = 2 * kk - 1;
                Some(&o * &o)
            }
            SequenceSpec::Arithmetic { start, step } => Some(BigInt::from(*start) + (kk - 1) * BigInt::from(*step)),
            SequenceSpec::Lacunary { base } => Some(num_traits::pow(BigInt::from(*base), k)),
            SequenceSpec::Explicit { terms } => terms.get(k.checked_sub(1)?).map(|&t| BigInt::from(t)),
        }
    }

    /// Parses `squares`, `odd_squares`, `arith:START:STEP`, `lacunary:BASE`
    /// or a comma-separated list.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = match s {
            "squares" => SequenceSpec::Squares,
            "odd_squares" | "odd-squares" => SequenceSpec::OddSquares,
            _ => {
                let bad = || invalid(format!("cannot parse sequence {s:?}"));
                if let Some(rest) = s.strip_prefix("arith:") {
                    let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                    SequenceSpec::Arithmetic {
                        start: a.trim().parse().map_err(|_| bad())?,
                        step: b.trim().parse().map_err(|_| bad())?,
                    }
                } else if let Some(rest) = s.strip_prefix("lacunary:") {
                    SequenceSpec::Lacunary {
                        base: rest.trim().parse().map_err(|_| bad())?,
                    }
                } else {
                    let terms = s
                        .split(',')
                        .map(|t| t.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    SequenceSpec::Explicit { terms }
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylAverage {
    pub n: usize,
    /// `α` in turns: the phase of term `k` is `2π α s_k`.
    pub turn: QuadraticReal,
    pub magnitude: f64,
    pub error_bound: f64,
    pub precision_bits: u32,
}

/// Neumaier compensated sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Terms below this size use wrapping fixed-point products; larger ones are
/// reduced exactly.
const FAST_TERM: u128 = 1 << 60;

/// `|(1/n) Σ_{k=1}^{n} e^{2πi α s_k}|`.
pub fn weyl_average(s: &SequenceSpec, turn: &QuadraticReal, n: usize, caps: &Caps) -> Result<WeylAverage> {
    s.validate()?;
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    caps.check_states("Weyl sum length", n as u128)?;
    if s.len().is_some_and(|l| l < n) {
        return Err(invalid(format!("sequence has only {} terms", s.len().unwrap())));
    }
    let base = turn.frac_fixed();
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut phase_err = 0.0f64;
    for k in 1..=n {
        let sk = s.term(k).expect("length checked");
        let small = u128::try_from(&sk).ok().filter(|&v| v < FAST_TERM).or_else(|| {
            i128::try_from(&sk).ok().filter(|v| v.unsigned_abs() < FAST_TERM).map(|v| v as u128)
        });
        let t = match small {
            Some(v) => {
                phase_err = phase_err.max(v.min(v.wrapping_neg()) as f64 / 2f64.powi(FRAC_BITS as i32));
                base.wrapping_mul(v)
            }
            None => turn.mul_int(&sk).frac_fixed(),
        };
        if t == 0 {
            re.add(1.0);
            continue;
        }
        let x = (t >> 64) as f64 / 2f64.powi(64);
        let ang = std::f64::consts::TAU * x;
        re.add(ang.cos());
        im.add(ang.sin());
    }
    let nf = n as f64;
    let magnitude = (re.value() / nf).hypot(im.value() / nf);
    // phase truncation (2^-64 turns plus the fixed-point error of α s_k),
    // libm cos/sin, and the final division and hypot
    let error_bound = std::f64::consts::TAU * (phase_err + 2f64.powi(-64)) + 4.0 * f64::EPSILON;
    Ok(WeylAverage {
        n,
        turn: turn.clone(),
        magnitude,
        error_bound,
        precision_bits: FRAC_BITS,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceHit {
    pub index: usize,
    pub d: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationRecurrence {
    pub alpha: QuadraticReal,
    pub eps: String,
    pub searched: usize,
    pub hit: Option<RecurrenceHit>,
}

/// Least `d = s_j` with `‖d α‖ < ε` among the first `max_terms` terms.
pub fn rotation_recurrence(
    alpha: &QuadraticReal,
    eps: &Rational,
    s: &SequenceSpec,
    max_terms: usize,
) -> Result<RotationRecurrence> {
    s.validate()?;
    let limit = s.len().map_or(max_terms, |l| l.min(max_terms));
    let mut hit = None;
    let mut searched = 0;
    for j in 1..=limit {
        searched = j;
        let d = s.term(j).unwrap();
        let x = alpha.mul_int(&d);
        if x.dist_lt(eps) {
            hit = Some(RecurrenceHit {
                index: j,
                d: d.to_string(),
                distance: x.dist_f64(),
            });
            break;
        }
    }
    Ok(RotationRecurrence {
        alpha: alpha.clone(),
        eps: eps.to_string(),
        searched,
        hit,
    })
}

/// `‖α s_k‖` for the first `n` terms, from the fixed-point fraction.
pub fn rotation_distances(alpha: &QuadraticReal, s: &SequenceSpec, n: usize) -> Vec<f64> {
    (1..=n)
        .map_while(|k| s.term(k))
        .map(|d| fixed_dist(alpha.mul_int(&d).frac_fixed()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(s: &str) -> QuadraticReal {
        QuadraticReal::parse(s).unwrap()
    }

    /// Plain f64 oracle using `rem_euclid` on `α k²` with a two-part α.
    fn naive_squares(alpha_hi: f64, alpha_lo: f64, n: usize) -> f64 {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for k in 1..=n as u64 {
            let s = (k * k) as f64;
            let x = (s * alpha_hi).rem_euclid(1.0) + s * alpha_lo;
            re += (std::f64::consts::TAU * x).cos();
            im += (std::f64::consts::TAU * x).sin();
        }
        (re / n as f64).hypot(im / n as f64)
    }

    #[test]
    fn zero_angle_is_one() {
        for s in [SequenceSpec::Squares, SequenceSpec::Lacunary { base: 3 }] {
            for n in [1, 7, 1000] {
                assert_eq!(weyl_average(&s, &q("0"), n, &Caps::default()).unwrap().magnitude, 1.0);
            }
        }
    }

    #[test]
    fn alternating() {
        let s = SequenceSpec::Arithmetic { start: 1, step: 1 };
        for n in 1..50 {
            let w = weyl_average(&s, &q("1/2"), n, &Caps::default()).unwrap();
            assert!(w.magnitude <= 1.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn squares_against_oracle() {
        let a = q("sqrt2m1");
        let w = weyl_average(&SequenceSpec::Squares, &a, 2000, &Caps::default()).unwrap();
        let hi = 2f64.sqrt() - 1.0;
        let lo = -9.667_293_313_452_913e-17; // (√2 - 1) - hi
        let o = naive_squares(hi, lo, 2000);
        assert!((w.magnitude - o).abs() < 1e-6, "{} {}", w.magnitude, o);
    }

    #[test]
    fn rational_rotation() {
        let r = rotation_recurrence(&q("1/3"), &rat(1, 100), &SequenceSpec::Arithmetic { start: 3, step: 3 }, 10).unwrap();
        let hit = r.hit.unwrap();
        assert_eq!(hit.d, "3");
        assert_eq!(hit.distance, 0.0);
        let r = rotation_recurrence(&q("1/2"), &rat(1, 10), &SequenceSpec::OddSquares, 5000).unwrap();
        assert!(r.hit.is_none());
        assert_eq!(r.searched, 5000);
    }

    #[test]
    fn parse_sequences() {
        assert_eq!(SequenceSpec::parse("arith:3:3").unwrap(), SequenceSpec::Arithmetic { start: 3, step: 3 });
        assert_eq!(SequenceSpec::parse("1, 4, 9").unwrap().term(3), Some(BigInt::from(9)));
        assert!(SequenceSpec::parse("3,2").is_err());
        assert_eq!(SequenceSpec::OddSquares.term(2), Some(BigInt::from(9)));
    }
}
