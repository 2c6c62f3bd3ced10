//! Completely additive arithmetic functions and their consistent extensions.
//!
//! A completely additive `f` with `f(p) = a_p` extends to the map with
//! `c(Q,∞) = 0` and `c(Q,p) = −a_p/ln p`, since `log‖n‖_p = −v_p(n)·ln p`.

use num_traits::Zero;

use crate::consistent::{lambda_value, ConsistentMap, NamedRule};
use crate::error::{Error, Result};
use crate::numerics::{int, to_f64, Rational};
use crate::places::{self, Place};
use crate::primes;
use crate::quadfield::{Field, QuadField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditiveKind {
    /// `ln |n|`.
    Log,
    /// Number of prime factors with multiplicity.
    Omega,
    /// Sum of prime factors with multiplicity.
    Psi,
}

impl AdditiveKind {
    pub fn parse(s: &str) -> Option<AdditiveKind> {
        match s {
            "log" => Some(AdditiveKind::Log),
            "omega" => Some(AdditiveKind::Omega),
            "psi" => Some(AdditiveKind::Psi),
            _ => None,
        }
    }

    pub fn rule(self) -> NamedRule {
        match self {
            AdditiveKind::Log => NamedRule::Log,
            AdditiveKind::Omega => NamedRule::Omega,
            AdditiveKind::Psi => NamedRule::Psi,
        }
    }
}

fn signed_factorization(n: &Rational) -> Result<Vec<(u64, i64)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut out: Vec<(u64, i64)> =
        primes::factor(n.numer())?.into_iter().map(|(p, e)| (p, e as i64)).collect();
    out.extend(primes::factor(n.denom())?.into_iter().map(|(p, e)| (p, -(e as i64))));
    Ok(out)
}

/// `Ω(n) = Σ_p v_p(n)`, extended to nonzero rationals.
pub fn omega(n: &Rational) -> Result<Rational> {
    Ok(int(signed_factorization(n)?.iter().map(|(_, e)| e).sum()))
}

/// `Ψ(n) = Σ_p p·v_p(n)`, extended to nonzero rationals.
pub fn psi(n: &Rational) -> Result<Rational> {
    let total: i128 = signed_factorization(n)?.iter().map(|&(p, e)| p as i128 * e as i128).sum();
    Ok(Rational::from_integer(total.into()))
}

/// The consistent map extending `kind`, normalized by `c(Q,∞) = 0`.
pub fn build_extension(kind: AdditiveKind) -> ConsistentMap {
    ConsistentMap::named(kind.rule()).expect("named rules over Q are valid")
}

#[derive(Debug, Clone)]
pub struct RatioEntry {
    pub place: Place,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub prime_bound: u64,
    pub max_ratio: f64,
    pub argmax: Place,
    /// `(p, max |c(K,v)/λ(K,v)| over places above p in every sampled field)`.
    pub per_prime: Vec<(u64, f64)>,
    /// The ratio at the archimedean places, maximized the same way.
    pub at_infinity: f64,
    pub entries: Vec<RatioEntry>,
}

/// `|c(K,v)/λ(K,v)|` over the places of `Q` and of each sample field lying over
/// `∞` and the primes up to `prime_bound`.
///
/// This samples a supremum over infinitely many places; nothing is claimed
/// beyond the range examined.
pub fn continuity_diagnostic(
    c: &ConsistentMap,
    prime_bound: u64,
    sample_fields: &[QuadField],
) -> Result<ContinuityReport> {
    let mut fields = vec![Field::Rational];
    fields.extend(sample_fields.iter().map(QuadField::as_field));
    if !fields.contains(&c.base()) {
        fields.push(c.base());
    }
    let ratio = |v: &Place| -> Result<f64> {
        let value = c.evaluate_at(v)?.to_f64(v.prime_below());
        Ok((value / to_f64(&lambda_value(v))).abs())
    };
    let mut entries = Vec::new();
    let max_over = |over: &Place, entries: &mut Vec<RatioEntry>| -> Result<f64> {
        let mut best = 0.0f64;
        for &f in &fields {
            for v in places::places_above(f, over) {
                let r = ratio(&v)?;
                best = best.max(r);
                entries.push(RatioEntry { place: v, ratio: r });
            }
        }
        Ok(best)
    };
    let at_infinity = max_over(&Place::infinity(), &mut entries)?;
    let mut per_prime = Vec::new();
    for p in primes::primes_up_to(prime_bound) {
        per_prime.push((p, max_over(&Place::prime(p), &mut entries)?));
    }
    let (mut max_ratio, mut argmax) = (f64::NEG_INFINITY, Place::infinity());
    for e in &entries {
        if e.ratio > max_ratio {
            max_ratio = e.ratio;
            argmax = e.place;
        }
    }
    Ok(ContinuityReport { prime_bound, max_ratio, argmax, per_prime, at_infinity, entries })
}
