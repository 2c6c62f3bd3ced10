//! Arithmetic in `Q` and in quadratic fields `Q(√d)`.
//!
//! Elements are stored as `a + b√d` with exact rational coordinates. The ring
//! of integers uses the basis `{1, ω}` with `ω = (1+√d)/2` when `d ≡ 1 mod 4`
//! and `ω = √d` otherwise. The first real embedding sends `√d` to the positive
//! root; the second one is its conjugate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{self, int, ln_abs_rational, parse_rational, rat, Rational};
use crate::primes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !primes::is_squarefree(d) {
            return Err(Error::InvalidD(d));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// Whether the integral basis element is `(1+√d)/2`.
    pub fn half_integral(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    pub fn omega(&self) -> FieldElement {
        if self.half_integral() {
            self.elem(rat(1, 2), rat(1, 2))
        } else {
            self.elem(int(0), int(1))
        }
    }

    /// Trace and norm of `ω`, so that `ω² − tω + n = 0`.
    pub fn omega_poly(&self) -> (i64, i64) {
        if self.half_integral() {
            (1, (1 - self.d) / 4)
        } else {
            (0, -self.d)
        }
    }

    pub fn elem(&self, a: Rational, b: Rational) -> FieldElement {
        FieldElement { field: Field::Quadratic(*self), a, b }
    }

    pub fn elem_int(&self, a: i64, b: i64) -> FieldElement {
        self.elem(int(a), int(b))
    }

    /// `u + vω` for integers `u, v`.
    pub fn from_omega_coords(&self, u: &BigInt, v: &BigInt) -> FieldElement {
        let u = Rational::from_integer(u.clone());
        let v = Rational::from_integer(v.clone());
        if self.half_integral() {
            let half = rat(1, 2);
            self.elem(&u + &v * &half, v * half)
        } else {
            self.elem(u, v)
        }
    }

    /// Number of roots of unity in the field.
    pub fn torsion_order(&self) -> u32 {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// The fundamental unit `ε > 1` of a real quadratic field.
    ///
    /// Expands `ω` as a continued fraction and stops at the first convergent
    /// `p/q` with `N(p − qω) = ±1`; the unit is `p − q·ω'`, where `ω'` is the
    /// conjugate of `ω`.
    pub fn fundamental_unit(&self) -> Result<FieldElement> {
        if !self.is_real() {
            return Err(Error::NotRealField(self.d));
        }
        let (t, n) = self.omega_poly();
        let (t, n) = (BigInt::from(t), BigInt::from(n));
        let radicand = BigInt::from(self.d);
        let root = primes::isqrt(&radicand);
        // ω = (P + √d) / Q
        let (mut big_p, mut big_q) = if self.half_integral() {
            (BigInt::one(), BigInt::from(2))
        } else {
            (BigInt::zero(), BigInt::one())
        };
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        loop {
            let a = if big_q.is_positive() {
                (&big_p + &root).div_floor(&big_q)
            } else {
                (-&big_p - &root - BigInt::one()).div_floor(&-&big_q)
            };
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);

            // N(h − kω) = h² − t·h·k + n·k²
            let norm = &h * &h - &t * &h * &k + &n * &k * &k;
            if norm.abs().is_one() {
                let omega_conj = self.omega().conj();
                let unit = &FieldElement::from_int(&self.as_field(), &h)
                    - &(&omega_conj * &Rational::from_integer(k.clone()));
                debug_assert!(unit.norm().abs().is_one());
                return Ok(unit);
            }

            big_p = &a * &big_q - &big_p;
            big_q = (&radicand - &big_p * &big_p) / &big_q;
        }
    }

    pub fn as_field(&self) -> Field {
        Field::Quadratic(*self)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// `Q` or a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Quadratic(QuadField),
}

impl Field {
    pub fn degree(&self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        }
    }

    pub fn quadratic(&self) -> Option<QuadField> {
        match self {
            Field::Rational => None,
            Field::Quadratic(k) => Some(*k),
        }
    }

    /// Number of archimedean places.
    pub fn arch_count(&self) -> usize {
        match self {
            Field::Quadratic(k) if k.is_real() => 2,
            _ => 1,
        }
    }

    /// The smallest field of the two, when one contains the other.
    fn join(self, other: Field) -> Option<Field> {
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Field::Rational, b) => Some(b),
            (a, Field::Rational) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(k) => k.fmt(f),
        }
    }
}

/// `a + b√d`; for elements of `Q` the coordinate `b` is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    a: Rational,
    b: Rational,
}

impl FieldElement {
    pub fn rational(q: Rational) -> Self {
        FieldElement { field: Field::Rational, a: q, b: Rational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn from_int(field: &Field, n: &BigInt) -> Self {
        FieldElement {
            field: *field,
            a: Rational::from_integer(n.clone()),
            b: Rational::zero(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The same number viewed as an element of `field`.
    pub fn embed(&self, field: Field) -> Result<FieldElement> {
        match self.field.join(field) {
            Some(f) if f == field => Ok(FieldElement { field, ..self.clone() }),
            _ => Err(Error::FieldMismatch(self.field.to_string(), field.to_string())),
        }
    }

    fn d(&self) -> Rational {
        match self.field {
            Field::Rational => Rational::zero(),
            Field::Quadratic(k) => int(k.d),
        }
    }

    pub fn conj(&self) -> FieldElement {
        FieldElement { field: self.field, a: self.a.clone(), b: -&self.b }
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        match self.field {
            Field::Rational => self.a.clone(),
            Field::Quadratic(_) => &self.a * &self.a - self.d() * &self.b * &self.b,
        }
    }

    pub fn trace(&self) -> Rational {
        match self.field {
            Field::Rational => self.a.clone(),
            Field::Quadratic(_) => &self.a * int(2),
        }
    }

    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        let field = self
            .field
            .join(rhs.field)
            .ok_or_else(|| Error::FieldMismatch(self.field.to_string(), rhs.field.to_string()))?;
        let d = match field {
            Field::Rational => Rational::zero(),
            Field::Quadratic(k) => int(k.d),
        };
        Ok(FieldElement {
            field,
            a: &self.a * &rhs.a + d * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        })
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        let field = self
            .field
            .join(rhs.field)
            .ok_or_else(|| Error::FieldMismatch(self.field.to_string(), rhs.field.to_string()))?;
        Ok(FieldElement { field, a: &self.a + &rhs.a, b: &self.b + &rhs.b })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(FieldElement { field: self.field, a: c.a / &n, b: c.b / &n })
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.try_mul(&rhs.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<FieldElement> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = FieldElement { field: self.field, a: int(1), b: int(0) };
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Coordinates `(u, v)` with `self = u + vω`.
    pub fn omega_coords(&self) -> (Rational, Rational) {
        match self.field {
            Field::Quadratic(k) if k.half_integral() => {
                let v = &self.b * int(2);
                (&self.a - &self.b, v)
            }
            _ => (self.a.clone(), self.b.clone()),
        }
    }

    pub fn is_integral(&self) -> bool {
        let (u, v) = self.omega_coords();
        u.is_integer() && v.is_integer()
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    /// Least common denominator of the `ω`-coordinates.
    pub fn denominator(&self) -> BigInt {
        let (u, v) = self.omega_coords();
        u.denom().lcm(v.denom())
    }

    /// Value under the real embedding `index` (1 or 2) as a double.
    pub fn to_real(&self, index: u8) -> f64 {
        let sqrt_d = match self.field {
            Field::Quadratic(k) if k.is_real() => (k.d as f64).sqrt(),
            _ => 0.0,
        };
        let b = numerics::to_f64(&self.b) * sqrt_d;
        numerics::to_f64(&self.a) + if index == 2 { -b } else { b }
    }

    /// `ln |σ(self)|` for the archimedean embedding `index`.
    ///
    /// For complex embeddings this is `ln |z| = ½·ln |N(z)|`. For real
    /// embeddings the cancelling side is obtained from the exact norm, so
    /// units such as `ε^{-k}` keep full relative accuracy.
    pub fn ln_abs_embedding(&self, index: u8) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let k = match self.field {
            Field::Rational => return Ok(ln_abs_rational(&self.a)),
            Field::Quadratic(k) => k,
        };
        if !k.is_real() {
            return Ok(0.5 * ln_abs_rational(&self.norm()));
        }
        if self.b.is_zero() {
            return Ok(ln_abs_rational(&self.a));
        }
        if self.a.is_zero() {
            return Ok(ln_abs_rational(&self.b) + 0.5 * (k.d as f64).ln());
        }
        let same_sign = self.a.is_positive() == self.b.is_positive();
        let cancels = if index == 1 { !same_sign } else { same_sign };
        let ln_sum = |x: &FieldElement| {
            // ln(|a| + |b|√d), computed relative to the larger term
            let la = ln_abs_rational(&x.a);
            let lb = ln_abs_rational(&x.b) + 0.5 * (k.d as f64).ln();
            let m = la.max(lb);
            m + ((la - m).exp() + (lb - m).exp()).ln()
        };
        if cancels {
            Ok(ln_abs_rational(&self.norm()) - ln_sum(self))
        } else {
            Ok(ln_sum(self))
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(&-rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Mul<&Rational> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &Rational) -> FieldElement {
        FieldElement { field: self.field, a: &self.a * rhs, b: &self.b * rhs }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field, a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for FieldElement {
    /// `a+b*sqrt(d)` for quadratic elements, `a` for rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Rational => write!(f, "{}", self.a),
            Field::Quadratic(k) => {
                if self.b.is_negative() {
                    write!(f, "{}-{}*sqrt({})", self.a, -&self.b, k.d)
                } else {
                    write!(f, "{}+{}*sqrt({})", self.a, self.b, k.d)
                }
            }
        }
    }
}

/// Parses `a+b*sqrt(d)` (also `a-b*sqrt(d)`, `b*sqrt(d)`, `sqrt(d)`, `a`).
///
/// A plain rational is placed in `context` when one is given, otherwise in `Q`.
pub fn parse_element(s: &str, context: Option<QuadField>) -> Result<FieldElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a field element: {s:?}"));
    let Some(idx) = s.find("sqrt(") else {
        let q = parse_rational(&s)?;
        return Ok(match context {
            Some(k) => k.elem(q, int(0)),
            None => FieldElement::rational(q),
        });
    };
    let rest = &s[idx + 5..];
    let close = rest.find(')').ok_or_else(bad)?;
    if close + 1 != rest.len() {
        return Err(bad());
    }
    let d: i64 = rest[..close].parse().map_err(|_| bad())?;
    let field = QuadField::new(d)?;
    if let Some(k) = context {
        if k != field {
            return Err(Error::FieldMismatch(k.to_string(), field.to_string()));
        }
    }
    let coeffs = s[..idx].strip_suffix('*').unwrap_or(&s[..idx]);
    let bytes = coeffs.as_bytes();
    let is_sign = |c: u8| c == b'+' || c == b'-';
    let split = (1..bytes.len())
        .rev()
        .find(|&i| is_sign(bytes[i]) && !is_sign(bytes[i - 1]));
    let (a_str, b_str) = match split {
        Some(i) => (&coeffs[..i], &coeffs[i..]),
        None => ("", coeffs),
    };
    let a = if a_str.is_empty() { int(0) } else { parse_rational(a_str)? };
    let b = match b_str.strip_prefix('+').unwrap_or(b_str) {
        "" => int(1),
        "-" => int(-1),
        other => parse_rational(other)?,
    };
    Ok(field.elem(a, b))
}
