use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::places::{self, Place};
use crate::quadfield::{FieldElement, QuadField};

/// Fundamental unit plus one prime generator per finite place of `S`.
#[derive(Debug, Clone)]
pub struct SUnitBasis {
    pub field: QuadField,
    /// Archimedean places first, then the finite ones.
    pub s: Vec<Place>,
    pub unit: Option<FieldElement>,
    pub generators: BTreeMap<Place, FieldElement>,
}

impl SUnitBasis {
    /// `S` = the archimedean places and every place over the given primes.
    pub fn new(k: QuadField, primes: &[u64], bound: u64) -> Result<Self> {
        let field = k.as_field();
        let mut s = places::arch_places(field);
        let mut generators = BTreeMap::new();
        for &p in primes {
            if !crate::primes::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            for w in places::places_over_prime(field, p) {
                if !generators.contains_key(&w) {
                    generators.insert(w, places::ideal_generator(k, &w, bound)?);
                    s.push(w);
                }
            }
        }
        let unit = if k.is_real() { Some(k.fundamental_unit()?) } else { None };
        Ok(SUnitBasis { field: k, s, unit, generators })
    }

    pub fn contains(&self, w: &Place) -> bool {
        self.s.contains(w)
    }

    /// `ζ·ε^r·Π β_w^{s_w}`.
    pub fn rebuild(&self, d: &SUnitDecomposition) -> Result<FieldElement> {
        let mut x = d.torsion.clone();
        if let (Some(eps), Some(r)) = (&self.unit, d.unit_exponents.first()) {
            x = &x * &eps.pow(exponent_i64(r)?)?;
        }
        for (w, s) in &d.generator_exponents {
            x = &x * &self.generators[w].pow(exponent_i64(s)?)?;
        }
        Ok(x)
    }
}

fn exponent_i64(q: &Rational) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::NonIntegralExponent { place: "-".into(), exponent: q.to_string() });
    }
    q.to_integer().to_i64().ok_or_else(|| Error::NonIntegralExponent {
        place: "-".into(),
        exponent: q.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SUnitDecomposition {
    pub unit_exponents: Vec<Rational>,
    pub generator_exponents: BTreeMap<Place, Rational>,
    /// The root of unity `ζ` with `x = ζ·ε^r·Π β_w^{s_w}`.
    pub torsion: FieldElement,
}

/// Writes an S-unit `x` as `ζ·ε^r·Π β_w^{s_w}`.
///
/// Generator exponents come from valuations; the unit exponent is read off the
/// first archimedean log of the remaining unit and then checked exactly.
pub fn sunit_decompose(x: &FieldElement, basis: &SUnitBasis) -> Result<SUnitDecomposition> {
    let k = basis.field;
    let x = x.embed(k.as_field())?;
    for w in places::support(&x)? {
        if !w.is_archimedean() && !basis.contains(&w) {
            return Err(Error::NotSUnit(w.to_string()));
        }
    }
    let mut gamma = x.clone();
    let mut generator_exponents = BTreeMap::new();
    for (w, beta) in &basis.generators {
        let s = places::valuation(&x, w)? / places::valuation(beta, w)?;
        if !s.is_integer() {
            return Err(Error::NonIntegralExponent { place: w.to_string(), exponent: s.to_string() });
        }
        let e = exponent_i64(&s)?;
        if e != 0 {
            gamma = &gamma * &beta.pow(-e)?;
        }
        generator_exponents.insert(*w, s);
    }
    let mut unit_exponents = Vec::new();
    if let Some(eps) = &basis.unit {
        let r = (gamma.ln_abs_embedding(1)? / eps.ln_abs_embedding(1)?).round();
        let r = r as i64;
        gamma = &gamma * &eps.pow(-r)?;
        unit_exponents.push(Rational::from_integer(r.into()));
    }
    if !places::roots_of_unity(k).contains(&gamma) {
        return Err(Error::NotSUnit(format!("residual {gamma} is not a root of unity")));
    }
    Ok(SUnitDecomposition { unit_exponents, generator_exponents, torsion: gamma })
}
