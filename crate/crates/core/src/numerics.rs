//! Exact rationals, formal log-linear numbers and float-to-rational detection.
//!
//! A [`LogLinear`] value is `q0 + Σ q_p·ln p + f`, where the `q`s are exact
//! rationals and `f` is an optional double-precision part collecting every
//! contribution that cannot be kept exact (archimedean logarithms of quadratic
//! irrationals, float-valued coefficients).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::consistent::LocalValue;
use crate::error::{Error, Result};
use crate::places::LogAbs;

pub type Rational = BigRational;

/// Default absolute tolerance for float comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(x) if x.is_finite() && (x != 0.0 || q.is_zero()) => x,
        // numerator or denominator overflowed f64 range
        _ => {
            let sign = if q.is_negative() { -1.0 } else { 1.0 };
            sign * ln_abs_rational(q).exp()
        }
    }
}

/// The exact rational value of a finite double.
pub fn from_f64_exact(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Returns `Some(x)` when `q` is exactly representable as a double.
pub fn exact_f64(q: &Rational) -> Option<f64> {
    let x = q.to_f64()?;
    (x.is_finite() && Rational::from_float(x).as_ref() == Some(q)).then_some(x)
}

/// `ln |n|` for a nonzero big integer, without overflowing f64.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |q|` for a nonzero rational.
pub fn ln_abs_rational(q: &Rational) -> f64 {
    ln_abs_bigint(q.numer()) - ln_abs_bigint(q.denom())
}

/// `q0 + Σ q_p·ln p + f`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogLinear {
    pub rational: Rational,
    pub logs: BTreeMap<u64, Rational>,
    /// `None` while no inexact contribution has been added.
    pub float: Option<f64>,
}

impl LogLinear {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        LogLinear { rational: q, ..Default::default() }
    }

    pub fn from_log(p: u64, q: Rational) -> Self {
        let mut out = Self::zero();
        out.add_log(p, q);
        out
    }

    pub fn from_float(x: f64) -> Self {
        LogLinear { float: Some(x), ..Default::default() }
    }

    pub fn is_exact(&self) -> bool {
        self.float.is_none()
    }

    /// The value as a plain rational, when it is exact and has no log terms.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.is_exact() && self.logs.is_empty()).then_some(&self.rational)
    }

    pub fn add_log(&mut self, p: u64, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.logs.entry(p).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.logs.remove(&p);
        }
    }

    pub fn add_float(&mut self, x: f64) {
        *self.float.get_or_insert(0.0) += x;
    }

    pub fn to_f64(&self) -> f64 {
        let logs: f64 = self
            .logs
            .iter()
            .map(|(&p, q)| to_f64(q) * (p as f64).ln())
            .sum();
        to_f64(&self.rational) + logs + self.float.unwrap_or(0.0)
    }

    pub fn scale(&self, t: &Rational) -> LogLinear {
        if t.is_zero() {
            return LogLinear::zero();
        }
        LogLinear {
            rational: &self.rational * t,
            logs: self.logs.iter().map(|(&p, q)| (p, q * t)).collect(),
            float: self.float.map(|f| f * to_f64(t)),
        }
    }

    /// Multiplies by a float; the result is inexact unless `t == 0`.
    pub fn scale_f64(&self, t: f64) -> LogLinear {
        if t == 0.0 {
            return LogLinear::zero();
        }
        LogLinear::from_float(self.to_f64() * t)
    }

    /// Returns `self + coeff·logabs`.
    ///
    /// Exact contributions land in the rational part (`OverLogP` against a
    /// non-archimedean log) or in the log terms (`Rational` against a
    /// non-archimedean log); everything else lands in the float part.
    ///
    /// Panics when an `OverLogP` coefficient meets an archimedean log; such a
    /// coefficient has no prime to divide by.
    pub fn scale_add(mut self, coeff: &LocalValue, logabs: &LogAbs) -> LogLinear {
        if coeff.is_exact_zero() {
            return self;
        }
        match (coeff, logabs) {
            (LocalValue::Rational(q), LogAbs::NonArch { p, exponent }) => {
                self.add_log(*p, q * exponent);
            }
            (LocalValue::OverLogP(q), LogAbs::NonArch { exponent, .. }) => {
                self.rational += q * exponent;
            }
            (LocalValue::Float(x), LogAbs::NonArch { p, exponent }) => {
                self.add_float(x * to_f64(exponent) * (*p as f64).ln());
            }
            (LocalValue::Rational(q), LogAbs::Arch(l)) => self.add_float(to_f64(q) * l),
            (LocalValue::Float(x), LogAbs::Arch(l)) => self.add_float(x * l),
            (LocalValue::OverLogP(_), LogAbs::Arch(_)) => {
                panic!("OverLogP coefficient attached to an archimedean place")
            }
        }
        self
    }
}

impl Add for &LogLinear {
    type Output = LogLinear;
    fn add(self, rhs: &LogLinear) -> LogLinear {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LogLinear {
    type Output = LogLinear;
    fn add(mut self, rhs: LogLinear) -> LogLinear {
        self += &rhs;
        self
    }
}

impl AddAssign<&LogLinear> for LogLinear {
    fn add_assign(&mut self, rhs: &LogLinear) {
        self.rational += &rhs.rational;
        for (&p, q) in &rhs.logs {
            self.add_log(p, q.clone());
        }
        if let Some(f) = rhs.float {
            self.add_float(f);
        }
    }
}

impl Neg for &LogLinear {
    type Output = LogLinear;
    fn neg(self) -> LogLinear {
        LogLinear {
            rational: -&self.rational,
            logs: self.logs.iter().map(|(&p, q)| (p, -q)).collect(),
            float: self.float.map(|f| -f),
        }
    }
}

impl Sub for &LogLinear {
    type Output = LogLinear;
    fn sub(self, rhs: &LogLinear) -> LogLinear {
        self + &(-rhs)
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || (self.logs.is_empty() && self.float.is_none()) {
            parts.push(self.rational.to_string());
        }
        for (p, q) in &self.logs {
            if q.is_one() {
                parts.push(format!("log({p})"));
            } else {
                parts.push(format!("{q}*log({p})"));
            }
        }
        if let Some(x) = self.float {
            parts.push(format!("{x:e}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Best rational approximation `p/q` with `q <= max_den`, returned when it
/// lies within `tol` of `x`.
pub fn rational_detect(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    assert!(max_den >= 1 && tol > 0.0);
    let exact = from_f64_exact(x)?;
    let best = limit_denominator(&exact, &BigInt::from(max_den));
    let err = to_f64(&(&best - &exact)).abs();
    (err <= tol).then_some(best)
}

/// Closest rational to `x` with denominator at most `max_den`, via the
/// continued-fraction convergents and the last admissible semiconvergent.
pub fn limit_denominator(x: &Rational, max_den: &BigInt) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_add_lands_in_the_right_part() {
        let over = LocalValue::OverLogP(int(-1));
        let acc = LogLinear::zero().scale_add(&over, &LogAbs::NonArch { p: 2, exponent: int(-2) });
        assert_eq!(acc.as_rational(), Some(&int(2)));

        let plain = LocalValue::Rational(int(-1));
        let acc = LogLinear::zero().scale_add(&plain, &LogAbs::NonArch { p: 3, exponent: int(-1) });
        assert!(acc.is_exact());
        assert!(acc.rational.is_zero());
        assert_eq!(acc.logs, BTreeMap::from([(3, int(1))]));

        let zero = LocalValue::Rational(int(0));
        let acc = LogLinear::zero().scale_add(&zero, &LogAbs::Arch(1.7));
        assert_eq!(acc, LogLinear::zero());
        assert!(acc.is_exact());
    }

    #[test]
    fn to_float_examples() {
        assert_eq!(LogLinear::from_rational(int(3)).to_f64(), 3.0);
        let l2 = LogLinear::from_log(2, int(1)).to_f64();
        assert!((l2 - 0.693_147_180_559_945_3).abs() < 1e-15);
        let mut x = LogLinear::from_log(2, int(2));
        x.add_log(3, int(1));
        assert!((x.to_f64() - 2.484_906_649_788_000_3).abs() < 1e-14);
    }

    #[test]
    fn detect_examples() {
        assert_eq!(rational_detect(0.5, 10, 1e-9), Some(rat(1, 2)));
        assert_eq!(rational_detect(0.333333333, 10, 1e-6), Some(rat(1, 3)));
        assert_eq!(rational_detect(0.881373587, 100, 1e-9), None);
        assert_eq!(rational_detect(-2.0, 1, 1e-9), Some(int(-2)));
        assert_eq!(rational_detect(f64::NAN, 10, 1e-9), None);
    }

    #[test]
    fn limit_denominator_semiconvergent() {
        // pi ~ 355/113; with q <= 100 the answer is the semiconvergent 311/99
        let pi = from_f64_exact(std::f64::consts::PI).unwrap();
        assert_eq!(limit_denominator(&pi, &BigInt::from(100)), rat(311, 99));
        assert_eq!(limit_denominator(&pi, &BigInt::from(113)), rat(355, 113));
        let neg = from_f64_exact(-std::f64::consts::PI).unwrap();
        assert_eq!(limit_denominator(&neg, &BigInt::from(7)), rat(-22, 7));
    }

    #[test]
    fn parse_and_ln_helpers() {
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let big = BigInt::from(3).pow(2000);
        assert!((ln_abs_bigint(&big) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(exact_f64(&rat(5, 2)), Some(2.5));
        assert_eq!(exact_f64(&rat(1, 3)), None);
    }
}
