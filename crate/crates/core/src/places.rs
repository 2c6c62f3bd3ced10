//! Places of `Q` and of quadratic fields, valuations and normalized absolute
//! values.
//!
//! Absolute values are carried as logarithms only. At a non-archimedean place
//! `w | p` the value is `‖x‖_w = p^r` with an exact rational `r`, normalized
//! so that `‖·‖_w` extends the usual `p`-adic absolute value of `Q_p`.
//!
//! The two places over a split prime `p` are labelled by where they send
//! `√d`: place 1 uses the square root `r₀ mod p` with `0 < r₀ < p/2`. For
//! `p = 2` (only split when `d ≡ 1 mod 8`) place 1 is the one with `ω ↦ 0 mod 2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{int, Rational};
use crate::primes;
use crate::quadfield::{Field, FieldElement, QuadField};

/// Default coordinate bound for generator searches.
pub const DEFAULT_GENERATOR_BOUND: u64 = 10_000;

/// How a rational prime decomposes in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    /// One of the two places over a split prime, labelled 1 or 2.
    Split(u8),
    Inert,
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    RationalInfinity,
    RationalPrime(u64),
    /// Archimedean place of a quadratic field; index 2 only exists for real fields.
    Arch(u8),
    NonArch { p: u64, splitting: Splitting },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    field: Field,
    kind: PlaceKind,
}

impl Place {
    pub fn infinity() -> Place {
        Place { field: Field::Rational, kind: PlaceKind::RationalInfinity }
    }

    pub fn prime(p: u64) -> Place {
        Place { field: Field::Rational, kind: PlaceKind::RationalPrime(p) }
    }

    pub fn arch(k: QuadField, index: u8) -> Place {
        assert!(index == 1 || (index == 2 && k.is_real()), "no archimedean place {index} on {k}");
        Place { field: Field::Quadratic(k), kind: PlaceKind::Arch(index) }
    }

    pub fn nonarch(k: QuadField, p: u64, splitting: Splitting) -> Place {
        Place { field: Field::Quadratic(k), kind: PlaceKind::NonArch { p, splitting } }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.kind, PlaceKind::RationalInfinity | PlaceKind::Arch(_))
    }

    /// The rational prime below a non-archimedean place.
    pub fn prime_below(&self) -> Option<u64> {
        match self.kind {
            PlaceKind::RationalPrime(p) | PlaceKind::NonArch { p, .. } => Some(p),
            _ => None,
        }
    }

    /// The place of `Q` below this one.
    pub fn below(&self) -> Place {
        match self.prime_below() {
            Some(p) => Place::prime(p),
            None => Place::infinity(),
        }
    }

    /// `[K_v : Q_{p_v}]`.
    pub fn local_degree(&self) -> u32 {
        match (self.kind, self.field) {
            (PlaceKind::RationalInfinity | PlaceKind::RationalPrime(_), _) => 1,
            (PlaceKind::Arch(_), Field::Quadratic(k)) => {
                if k.is_real() {
                    1
                } else {
                    2
                }
            }
            (PlaceKind::NonArch { splitting: Splitting::Split(_), .. }, _) => 1,
            _ => 2,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        match self.kind {
            PlaceKind::NonArch { splitting: Splitting::Ramified, .. } => 2,
            _ => 1,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            PlaceKind::NonArch { splitting: Splitting::Inert, .. } => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Place {
    /// `inf`, `7` for places of `Q`; `inf:1`, `7:split:2`, `3:inert`, `2:ram`
    /// for places of a quadratic field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PlaceKind::RationalInfinity => write!(f, "inf"),
            PlaceKind::RationalPrime(p) => write!(f, "{p}"),
            PlaceKind::Arch(i) => write!(f, "inf:{i}"),
            PlaceKind::NonArch { p, splitting: Splitting::Split(i) } => write!(f, "{p}:split:{i}"),
            PlaceKind::NonArch { p, splitting: Splitting::Inert } => write!(f, "{p}:inert"),
            PlaceKind::NonArch { p, splitting: Splitting::Ramified } => write!(f, "{p}:ram"),
        }
    }
}

/// Parses the text form of a place of `field`, checking that it exists.
pub fn parse_place(s: &str, field: Field) -> Result<Place> {
    let bad = || Error::InvalidPlace(format!("{s:?} on {field}"));
    let parts: Vec<&str> = s.trim().split(':').collect();
    let place = match (field, parts.as_slice()) {
        (Field::Rational, ["inf"]) => Place::infinity(),
        (Field::Rational, [p]) => {
            let p: u64 = p.parse().map_err(|_| bad())?;
            Place::prime(p)
        }
        (Field::Quadratic(k), ["inf", i]) => {
            let i: u8 = i.parse().map_err(|_| bad())?;
            if !(i == 1 || (i == 2 && k.is_real())) {
                return Err(bad());
            }
            Place::arch(k, i)
        }
        (Field::Quadratic(k), [p, rest @ ..]) => {
            let p: u64 = p.parse().map_err(|_| bad())?;
            let splitting = match rest {
                ["split", i] => Splitting::Split(i.parse().map_err(|_| bad())?),
                ["inert"] => Splitting::Inert,
                ["ram"] => Splitting::Ramified,
                _ => return Err(bad()),
            };
            Place::nonarch(k, p, splitting)
        }
        _ => return Err(bad()),
    };
    match place.prime_below() {
        Some(p) if !primes::is_prime(p) => return Err(bad()),
        Some(p) => {
            if !places_over_prime(field, p).contains(&place) {
                return Err(bad());
            }
        }
        None => {}
    }
    Ok(place)
}

pub fn splitting_type(k: QuadField, p: u64) -> SplittingType {
    match primes::kronecker(k.discriminant(), p) {
        0 => SplittingType::Ramified,
        1 => SplittingType::Split,
        _ => SplittingType::Inert,
    }
}

pub fn arch_places(field: Field) -> Vec<Place> {
    match field {
        Field::Rational => vec![Place::infinity()],
        Field::Quadratic(k) if k.is_real() => vec![Place::arch(k, 1), Place::arch(k, 2)],
        Field::Quadratic(k) => vec![Place::arch(k, 1)],
    }
}

pub fn places_over_prime(field: Field, p: u64) -> Vec<Place> {
    match field {
        Field::Rational => vec![Place::prime(p)],
        Field::Quadratic(k) => match splitting_type(k, p) {
            SplittingType::Split => vec![
                Place::nonarch(k, p, Splitting::Split(1)),
                Place::nonarch(k, p, Splitting::Split(2)),
            ],
            SplittingType::Inert => vec![Place::nonarch(k, p, Splitting::Inert)],
            SplittingType::Ramified => vec![Place::nonarch(k, p, Splitting::Ramified)],
        },
    }
}

/// The places of `field` dividing the place `q` of `Q`.
pub fn places_above(field: Field, q: &Place) -> Vec<Place> {
    assert_eq!(q.field(), Field::Rational, "places_above expects a place of Q");
    match q.prime_below() {
        None => arch_places(field),
        Some(p) => places_over_prime(field, p),
    }
}

/// Root of `x² − t·x + n` (the minimal polynomial of `ω`) modulo `p^m`
/// corresponding to split place `index`.
fn split_root(k: QuadField, p: u64, index: u8, m: u32) -> BigInt {
    let (t, n) = k.omega_poly();
    let rho0 = if p == 2 {
        if index == 1 {
            0
        } else {
            1
        }
    } else {
        let r = primes::sqrt_mod(k.d().rem_euclid(p as i64) as u64, p)
            .expect("split prime has a square root of d");
        let r0 = r.min(p - r);
        let r = if index == 1 { r0 } else { p - r0 };
        if k.half_integral() {
            (1 + r) * p.div_ceil(2) % p
        } else {
            r
        }
    };
    let (t, n) = (BigInt::from(t), BigInt::from(n));
    let target = BigInt::from(p).pow(m);
    let mut rho = BigInt::from(rho0);
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let f = &rho * &rho - &t * &rho + &n;
        let df = BigInt::from(2) * &rho - &t;
        let inv = primes::inv_mod(&df, &modulus).expect("simple root");
        rho = (&rho - f * inv).mod_floor(&modulus);
    }
    rho
}

fn rational_valuation(q: &Rational, p: u64) -> i64 {
    primes::valuation(q.numer(), p) as i64 - primes::valuation(q.denom(), p) as i64
}

/// The valuation `v_P(x)` at a non-archimedean place (an integer for `x ∈ K^×`).
pub fn valuation(x: &FieldElement, w: &Place) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let x = x.embed(w.field())?;
    let v = match w.kind() {
        PlaceKind::RationalPrime(p) => rational_valuation(x.a(), p),
        PlaceKind::NonArch { p, splitting } => {
            let vn = rational_valuation(&x.norm(), p);
            match splitting {
                Splitting::Inert => vn / 2,
                Splitting::Ramified => vn,
                Splitting::Split(index) => {
                    let k = w.field().quadratic().unwrap();
                    let den = x.denominator();
                    let y = &x * &Rational::from_integer(den.clone());
                    let (u, v) = y.omega_coords();
                    let m = rational_valuation(&y.norm(), p) as u32 + 1;
                    let rho = split_root(k, p, index, m);
                    let modulus = BigInt::from(p).pow(m);
                    let image = (u.to_integer() + v.to_integer() * rho).mod_floor(&modulus);
                    debug_assert!(!image.is_zero());
                    primes::valuation(&image, p) as i64 - primes::valuation(&den, p) as i64
                }
            }
        }
        _ => return Err(Error::InvalidPlace(format!("{w} is archimedean"))),
    };
    Ok(int(v))
}

/// `log ‖x‖_v`, represented exactly at non-archimedean places.
#[derive(Debug, Clone, PartialEq)]
pub enum LogAbs {
    /// `‖x‖_v = p^exponent`.
    NonArch { p: u64, exponent: Rational },
    /// `log ‖x‖_v` itself.
    Arch(f64),
}

impl LogAbs {
    pub fn to_f64(&self) -> f64 {
        match self {
            LogAbs::NonArch { p, exponent } => crate::numerics::to_f64(exponent) * (*p as f64).ln(),
            LogAbs::Arch(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LogAbs::NonArch { exponent, .. } => exponent.is_zero(),
            LogAbs::Arch(x) => *x == 0.0,
        }
    }
}

/// `log ‖x^exponent‖_v`.
pub fn log_abs(x: &FieldElement, v: &Place, exponent: &Rational) -> Result<LogAbs> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let x = x.embed(v.field())?;
    match v.kind() {
        PlaceKind::RationalInfinity => Ok(LogAbs::Arch(
            x.ln_abs_embedding(1)? * crate::numerics::to_f64(exponent),
        )),
        PlaceKind::Arch(i) => Ok(LogAbs::Arch(
            x.ln_abs_embedding(i)? * crate::numerics::to_f64(exponent),
        )),
        PlaceKind::RationalPrime(p) | PlaceKind::NonArch { p, .. } => {
            let val = valuation(&x, v)?;
            let e = Rational::from_integer(BigInt::from(v.ramification_index()));
            Ok(LogAbs::NonArch { p, exponent: -(val * exponent) / e })
        }
    }
}

/// Every place where `‖x‖_v` may differ from 1: the archimedean places and
/// the places over primes dividing `N(D·x)·D`, with `D` the denominator of `x`.
pub fn support(x: &FieldElement) -> Result<Vec<Place>> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let den = x.denominator();
    let y = x * &Rational::from_integer(den.clone());
    let norm = y.norm();
    debug_assert!(norm.is_integer());
    let mut ps = primes::prime_divisors(&(norm.to_integer() * &den))?;
    ps.sort_unstable();
    let field = x.field();
    let mut out = arch_places(field);
    for p in ps {
        for w in places_over_prime(field, p) {
            if !valuation(x, &w)?.is_zero() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Roots of unity of a quadratic field.
pub fn roots_of_unity(k: QuadField) -> Vec<FieldElement> {
    let half = crate::numerics::rat(1, 2);
    let mut out = vec![k.elem_int(1, 0), k.elem_int(-1, 0)];
    match k.d() {
        -1 => out.extend([k.elem_int(0, 1), k.elem_int(0, -1)]),
        -3 => {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(k.elem(&half * int(a), &half * int(b)));
            }
        }
        _ => {}
    }
    out
}

/// Canonical associate of `beta` under multiplication by units.
///
/// Real fields: `σ₁(β) > 0` and `1 ≤ |σ₁(β)/σ₂(β)| < ε²`. Imaginary fields:
/// the argument of `β` lies in `[0, 2π/w)`, `w` the number of roots of unity.
pub fn normalize_associate(k: QuadField, beta: &FieldElement) -> Result<FieldElement> {
    if k.is_real() {
        let eps = k.fundamental_unit()?;
        let two_log_eps = 2.0 * eps.ln_abs_embedding(1)?;
        let t = beta.ln_abs_embedding(1)? - beta.ln_abs_embedding(2)?;
        let shift = (t / two_log_eps + 1e-9).floor() as i64;
        let mut out = beta * &eps.pow(-shift)?;
        if out.to_real(1) < 0.0 {
            out = -&out;
        }
        return Ok(out);
    }
    let w = k.torsion_order();
    let candidates = roots_of_unity(k).into_iter().map(|z| &z * beta);
    let in_sector = |x: &FieldElement| {
        let (a, b) = (x.a(), x.b());
        match w {
            4 => a.is_positive() && !b.is_negative(),
            6 => a.is_positive() && !b.is_negative() && b < a,
            _ => b.is_positive() || (b.is_zero() && a.is_positive()),
        }
    };
    let found = candidates.filter(in_sector).collect::<Vec<_>>();
    debug_assert_eq!(found.len(), 1);
    Ok(found.into_iter().next().expect("one associate per sector"))
}

/// Searches integral elements `u + vω` with `0 ≤ v ≤ bound` for one whose norm
/// has absolute value `p`.
fn search_norm(k: QuadField, p: u64, bound: u64) -> Option<FieldElement> {
    let d = BigInt::from(k.d());
    let p = BigInt::from(p);
    let signs: &[i64] = if k.is_real() { &[1, -1] } else { &[1] };
    for v in 0..=bound {
        let v = BigInt::from(v);
        for &sign in signs {
            if k.half_integral() {
                // (2u + v)² − d·v² = 4·N
                let s = BigInt::from(4 * sign) * &p + &d * &v * &v;
                if let Some(x) = primes::exact_sqrt(&s) {
                    if (&x - &v).is_even() {
                        let u = (&x - &v) / 2;
                        return Some(k.from_omega_coords(&u, &v));
                    }
                }
            } else {
                // u² − d·v² = N
                let s = BigInt::from(sign) * &p + &d * &v * &v;
                if let Some(u) = primes::exact_sqrt(&s) {
                    return Some(k.from_omega_coords(&u, &v));
                }
            }
        }
    }
    None
}

/// An integral `β` with `v_w(β) = 1` and `v_{w'}(β) = 0` at every other
/// non-archimedean place; a generator of the prime ideal of `w`.
///
/// Inert places get `β = p`. Otherwise the element of norm `±p` found by the
/// search is normalized with [`normalize_associate`]; over a split prime the
/// second place receives the conjugate of the first place's generator.
pub fn ideal_generator(k: QuadField, w: &Place, bound: u64) -> Result<FieldElement> {
    let (p, splitting) = match w.kind() {
        PlaceKind::NonArch { p, splitting } if w.field() == k.as_field() => (p, splitting),
        _ => return Err(Error::InvalidPlace(format!("{w} is not a finite place of {k}"))),
    };
    if splitting == Splitting::Inert {
        return Ok(k.elem_int(p as i64, 0));
    }
    let found = search_norm(k, p, bound).ok_or_else(|| Error::GeneratorNotFound {
        place: format!("{w} of {k}"),
        bound,
    })?;
    let beta = normalize_associate(k, &found)?;
    if splitting == Splitting::Ramified || valuation(&beta, w)?.is_positive() {
        Ok(beta)
    } else {
        Ok(beta.conj())
    }
}

/// `[K_w : Q_q]` summed over `w | q`; always equals `[K : Q]`.
pub fn local_degree_sum(field: Field, q: &Place) -> u32 {
    places_above(field, q).iter().map(Place::local_degree).sum()
}

impl Place {
    /// Whether `self` lies over `q`, a place of `Q`.
    pub fn divides(&self, q: &Place) -> bool {
        self.below() == *q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn k(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(k(2), 7), SplittingType::Split);
        assert_eq!(splitting_type(k(2), 2), SplittingType::Ramified);
        assert_eq!(splitting_type(k(2), 3), SplittingType::Inert);
        for p in primes::primes_up_to(500).into_iter().skip(1) {
            let expected = if matches!(p % 8, 1 | 7) { SplittingType::Split } else { SplittingType::Inert };
            assert_eq!(splitting_type(k(2), p), expected, "p = {p}");
        }
        assert_eq!(splitting_type(k(17), 2), SplittingType::Split);
        assert_eq!(splitting_type(k(5), 2), SplittingType::Inert);
        assert_eq!(splitting_type(k(-1), 2), SplittingType::Ramified);
    }

    #[test]
    fn places_above_examples() {
        let f = k(2).as_field();
        let inf = places_above(f, &Place::infinity());
        assert_eq!(inf, vec![Place::arch(k(2), 1), Place::arch(k(2), 2)]);
        assert_eq!(inf.iter().map(Place::local_degree).sum::<u32>(), 2);
        let seven = places_above(f, &Place::prime(7));
        assert_eq!(seven.len(), 2);
        assert!(seven.iter().all(|w| w.local_degree() == 1));
        let three = places_above(f, &Place::prime(3));
        assert_eq!(three, vec![Place::nonarch(k(2), 3, Splitting::Inert)]);
        assert_eq!(three[0].local_degree(), 2);
        let gauss = places_above(k(-1).as_field(), &Place::infinity());
        assert_eq!(gauss.len(), 1);
        assert_eq!(gauss[0].local_degree(), 2);
    }

    #[test]
    fn valuation_examples() {
        let f = k(2);
        let x = f.elem_int(3, 1);
        let w1 = Place::nonarch(f, 7, Splitting::Split(1));
        let w2 = Place::nonarch(f, 7, Splitting::Split(2));
        // √2 ↦ 3 at place 1, so 3 + √2 ↦ 6 there and 3 − √2 ↦ 0
        assert_eq!(valuation(&x, &w2).unwrap(), int(1));
        assert_eq!(valuation(&x, &w1).unwrap(), int(0));
        assert_eq!(valuation(&x.conj(), &w1).unwrap(), int(1));
        let ram = Place::nonarch(f, 2, Splitting::Ramified);
        assert_eq!(valuation(&f.elem_int(0, 1), &ram).unwrap(), int(1));
        assert_eq!(valuation(&f.elem_int(1, 0), &ram).unwrap(), int(0));
        assert_eq!(valuation(&f.elem_int(0, 0), &ram), Err(Error::ZeroElement));
        let q = (&x * &x).div(&x.conj()).unwrap();
        assert_eq!(valuation(&q, &w2).unwrap(), int(2));
        assert_eq!(valuation(&q, &w1).unwrap(), int(-1));
        assert_eq!(valuation(&FieldElement::rational(rat(49, 3)), &Place::prime(7)).unwrap(), int(2));
    }

    #[test]
    fn split_two_in_half_integral_field() {
        let f = k(17);
        let w1 = Place::nonarch(f, 2, Splitting::Split(1));
        let w2 = Place::nonarch(f, 2, Splitting::Split(2));
        // ω = (1+√17)/2 has norm −4 = −2²
        let omega = f.omega();
        let v1 = valuation(&omega, &w1).unwrap();
        let v2 = valuation(&omega, &w2).unwrap();
        assert_eq!(v1 + v2, int(2));
        assert_eq!(valuation(&f.elem_int(2, 0), &w1).unwrap(), int(1));
        let g1 = ideal_generator(f, &w1, 100).unwrap();
        assert_eq!(g1.norm().abs(), int(2));
        assert_eq!(valuation(&g1, &w1).unwrap(), int(1));
        assert_eq!(valuation(&g1, &w2).unwrap(), int(0));
    }

    #[test]
    fn log_abs_examples() {
        let f = k(2);
        let ram = Place::nonarch(f, 2, Splitting::Ramified);
        assert_eq!(
            log_abs(&f.elem_int(0, 1), &ram, &int(1)).unwrap(),
            LogAbs::NonArch { p: 2, exponent: rat(-1, 2) }
        );
        match log_abs(&f.elem_int(3, 1), &Place::arch(f, 1), &int(1)).unwrap() {
            LogAbs::Arch(l) => assert!((l - 1.484_829_689_621_330_4).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            log_abs(&FieldElement::from_i64(5), &Place::prime(5), &int(1)).unwrap(),
            LogAbs::NonArch { p: 5, exponent: int(-1) }
        );
        let inert = Place::nonarch(f, 3, Splitting::Inert);
        assert_eq!(
            log_abs(&f.elem_int(9, 0), &inert, &rat(1, 2)).unwrap(),
            LogAbs::NonArch { p: 3, exponent: int(-1) }
        );
    }

    #[test]
    fn generator_examples() {
        let f = k(2);
        let w7 = places_over_prime(f.as_field(), 7)
            .into_iter()
            .find(|w| valuation(&f.elem_int(3, 1), w).unwrap().is_positive())
            .unwrap();
        assert_eq!(ideal_generator(f, &w7, 100).unwrap(), f.elem_int(3, 1));
        let ram = Place::nonarch(f, 2, Splitting::Ramified);
        assert_eq!(ideal_generator(f, &ram, 100).unwrap(), f.elem_int(0, 1));
        let inert = Place::nonarch(f, 3, Splitting::Inert);
        assert_eq!(ideal_generator(f, &inert, 100).unwrap(), f.elem_int(3, 0));

        let bad = Place::nonarch(k(-5), 2, Splitting::Ramified);
        let err = ideal_generator(k(-5), &bad, 10_000).unwrap_err();
        assert!(matches!(err, Error::GeneratorNotFound { .. }));
        assert!(err.to_string().contains("class number"));
    }

    #[test]
    fn generators_have_isolated_support() {
        for d in [2, 3, 5, 6, 7, 13, -1, -2, -3, -7] {
            let f = k(d);
            for p in primes::primes_up_to(60) {
                for w in places_over_prime(f.as_field(), p) {
                    let beta = ideal_generator(f, &w, DEFAULT_GENERATOR_BOUND).unwrap();
                    assert!(beta.is_integral());
                    assert_eq!(valuation(&beta, &w).unwrap(), int(1), "d={d} w={w}");
                    let sup = support(&beta).unwrap();
                    let finite: Vec<_> = sup.iter().filter(|v| !v.is_archimedean()).collect();
                    assert_eq!(finite, vec![&w], "d={d} beta={beta}");
                }
            }
        }
    }

    #[test]
    fn conjugate_split_generators() {
        let f = k(2);
        for p in [7, 17, 23, 31, 41, 47, 71] {
            let w1 = Place::nonarch(f, p, Splitting::Split(1));
            let w2 = Place::nonarch(f, p, Splitting::Split(2));
            let b1 = ideal_generator(f, &w1, 1000).unwrap();
            let b2 = ideal_generator(f, &w2, 1000).unwrap();
            assert_eq!(b1.conj(), b2);
        }
    }

    #[test]
    fn place_text_round_trip() {
        let f = k(2).as_field();
        for s in ["inf:1", "inf:2", "7:split:1", "7:split:2", "3:inert", "2:ram"] {
            assert_eq!(parse_place(s, f).unwrap().to_string(), s);
        }
        assert_eq!(parse_place("inf", Field::Rational).unwrap(), Place::infinity());
        assert_eq!(parse_place("7", Field::Rational).unwrap(), Place::prime(7));
        assert!(parse_place("7:inert", f).is_err());
        assert!(parse_place("9:inert", f).is_err());
        assert!(parse_place("inf:2", k(-1).as_field()).is_err());
        assert!(parse_place("8", Field::Rational).is_err());
    }

    #[test]
    fn normalization_is_a_fundamental_domain() {
        let f = k(2);
        let eps = f.fundamental_unit().unwrap();
        let beta = f.elem_int(3, 1);
        for e in -4..=4 {
            for sign in [1, -1] {
                let x = &(&beta * &eps.pow(e).unwrap()) * &int(sign);
                assert_eq!(normalize_associate(f, &x).unwrap(), beta);
            }
        }
        let g = k(-3);
        let z = g.elem(rat(1, 2), rat(1, 2));
        let b = g.elem_int(2, 1);
        let n = normalize_associate(g, &b).unwrap();
        for e in 0..6 {
            assert_eq!(normalize_associate(g, &(&b * &z.pow(e).unwrap())).unwrap(), n);
        }
    }
}
