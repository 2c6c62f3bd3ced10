//! The functional `Φ_c(α) = Σ_v c(K,v)·log‖α‖_v` and its basic identities.

use crate::consistent::{lambda_value, ConsistentMap, LocalValue, Scalar};
use crate::error::{Error, Result};
use crate::numerics::{int, rat, LogLinear, Rational, DEFAULT_TOL};
use crate::places::{self, LogAbs, Place, DEFAULT_GENERATOR_BOUND};
use crate::primes;
use crate::quadfield::{Field, FieldElement, QuadField};

/// One summand `c(K,v)·log‖α‖_v`.
#[derive(Debug, Clone)]
pub struct PhiTerm {
    pub place: Place,
    pub coeff: LocalValue,
    pub logabs: LogAbs,
}

#[derive(Debug, Clone)]
pub struct PhiValue {
    pub value: LogLinear,
    pub terms: Vec<PhiTerm>,
}

/// `Φ_c(x^exponent)`, summed over the smallest field holding both `x` and the
/// base of `c`.
pub fn phi_eval(c: &ConsistentMap, x: &FieldElement, exponent: &Rational) -> Result<PhiValue> {
    let field = match (c.base(), x.field()) {
        (a, b) if a == b => a,
        (Field::Rational, b) => b,
        (a, Field::Rational) => a,
        (a, b) => {
            return Err(Error::UnsupportedFieldPair { base: a.to_string(), target: b.to_string() })
        }
    };
    phi_eval_over(c, x, exponent, field)
}

/// `Φ_c(x^exponent)` summed over the places of `field`, which must contain `x`.
pub fn phi_eval_over(c: &ConsistentMap, x: &FieldElement, exponent: &Rational, field: Field) -> Result<PhiValue> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let x = x.embed(field)?;
    // ln|x| of a rational x has an exact form Σ v_p(x)·ln p.
    let rational_logs = if x.is_rational() {
        rational_log_terms(x.a()).ok()
    } else {
        None
    };
    let mut value = LogLinear::zero();
    let mut terms = Vec::new();
    for v in places::support(&x)? {
        let coeff = c.evaluate_at(&v)?;
        let logabs = places::log_abs(&x, &v, exponent)?;
        match (&coeff, &logabs, &rational_logs) {
            (LocalValue::Rational(q), LogAbs::Arch(_), Some(logs)) => {
                let t = q * exponent;
                for (p, e) in logs {
                    value.add_log(*p, &t * e);
                }
            }
            _ => value = value.scale_add(&coeff, &logabs),
        }
        terms.push(PhiTerm { place: v, coeff, logabs });
    }
    Ok(PhiValue { value, terms })
}

/// `{p: v_p(q)}`; numerator and denominator are coprime, so primes never repeat.
fn rational_log_terms(q: &Rational) -> Result<Vec<(u64, Rational)>> {
    let mut out: Vec<(u64, Rational)> = Vec::new();
    for (p, e) in primes::factor(q.numer())? {
        out.push((p, int(e as i64)));
    }
    for (p, e) in primes::factor(q.denom())? {
        out.push((p, int(-(e as i64))));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ProductFormulaEntry {
    pub x: FieldElement,
    pub value: LogLinear,
    pub abs: f64,
    pub ok: bool,
}

/// `|Σ_v λ(K,v)·log‖x‖_v| ≤ 1e-9` for each sample.
pub fn product_formula_check(field: Field, samples: &[FieldElement]) -> Result<Vec<ProductFormulaEntry>> {
    let lambda = ConsistentMap::lambda(Scalar::Exact(int(1)));
    samples
        .iter()
        .map(|x| {
            let value = phi_eval_over(&lambda, x, &int(1), field)?.value;
            let abs = value.to_f64().abs();
            Ok(ProductFormulaEntry { x: x.clone(), value, abs, ok: abs <= DEFAULT_TOL })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct NormCompatibility {
    pub lhs: LogLinear,
    pub rhs: LogLinear,
    /// Both sides were exact and compared exactly.
    pub exact: bool,
    pub ok: bool,
}

/// `Φ_c(x) = ½·Φ_c(N(x))` for a map `c` based at `Q` and `x` quadratic.
pub fn norm_compatibility_check(c: &ConsistentMap, x: &FieldElement) -> Result<NormCompatibility> {
    if c.base() != Field::Rational {
        return Err(Error::InvalidMap(format!("expected a map based at Q, got base {}", c.base())));
    }
    let k = x.field().quadratic().ok_or_else(|| {
        Error::FieldMismatch(x.field().to_string(), "a quadratic field".into())
    })?;
    let lhs = phi_eval_over(c, x, &int(1), k.as_field())?.value;
    let norm = FieldElement::rational(x.norm());
    let rhs = phi_eval(c, &norm, &int(1))?.value.scale(&rat(1, 2));
    let exact = lhs.is_exact() && rhs.is_exact();
    let ok = if exact {
        lhs == rhs
    } else {
        (lhs.to_f64() - rhs.to_f64()).abs() <= DEFAULT_TOL
    };
    Ok(NormCompatibility { lhs, rhs, exact, ok })
}

#[derive(Debug, Clone)]
pub struct KernelTest {
    pub label: String,
    pub element: FieldElement,
    pub phi: f64,
}

#[derive(Debug, Clone)]
pub struct KernelPlaceCheck {
    pub place: Place,
    pub value: f64,
    pub expected: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ZeroPhiReport {
    pub tests: Vec<KernelTest>,
    /// Places whose generator could not be found within the search bound.
    pub skipped: Vec<Place>,
    /// `Φ_c` vanished on every test point.
    pub in_kernel: bool,
    /// `c(Q,∞)`.
    pub r: f64,
    /// Filled only in the kernel branch: `c(K,v)` against `c(Q,∞)·λ(K,v)`.
    pub place_checks: Vec<KernelPlaceCheck>,
}

impl ZeroPhiReport {
    /// Kernel branch holds and every place matched `r·λ`; or `Φ_c` is nonzero.
    pub fn consistent(&self) -> bool {
        !self.in_kernel || self.place_checks.iter().all(|c| c.ok)
    }
}

/// Tests `Φ_c` on the fundamental unit and on prime generators over primes up
/// to `prime_bound`. When all values vanish, checks `c(K,v) = c(Q,∞)·λ(K,v)`
/// at every tested place.
pub fn zero_phi_classify(c: &ConsistentMap, k: QuadField, prime_bound: u64) -> Result<ZeroPhiReport> {
    let field = k.as_field();
    let mut tests = Vec::new();
    let mut tested_places = places::arch_places(field);
    let mut skipped = Vec::new();
    if k.is_real() {
        let eps = k.fundamental_unit()?;
        let phi = phi_eval_over(c, &eps, &int(1), field)?.value.to_f64();
        tests.push(KernelTest { label: "unit".into(), element: eps, phi });
    }
    for p in primes::primes_up_to(prime_bound) {
        for w in places::places_over_prime(field, p) {
            match places::ideal_generator(k, &w, DEFAULT_GENERATOR_BOUND) {
                Ok(beta) => {
                    let phi = phi_eval_over(c, &beta, &int(1), field)?.value.to_f64();
                    tests.push(KernelTest { label: w.to_string(), element: beta, phi });
                    tested_places.push(w);
                }
                Err(Error::GeneratorNotFound { .. }) => skipped.push(w),
                Err(e) => return Err(e),
            }
        }
    }
    let in_kernel = tests.iter().all(|t| t.phi.abs() <= DEFAULT_TOL);
    let r = c.evaluate_at(&Place::infinity())?.to_f64(None);
    let mut place_checks = Vec::new();
    if in_kernel {
        for v in tested_places {
            let value = c.evaluate_at(&v)?.to_f64(v.prime_below());
            let expected = r * crate::numerics::to_f64(&lambda_value(&v));
            let ok = (value - expected).abs() <= DEFAULT_TOL;
            place_checks.push(KernelPlaceCheck { place: v, value, expected, ok });
        }
    }
    Ok(ZeroPhiReport { tests, skipped, in_kernel, r, place_checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistent::NamedRule;

    fn k2() -> QuadField {
        QuadField::new(2).unwrap()
    }

    fn exact(v: &PhiValue) -> Rational {
        v.value.as_rational().cloned().expect("exact rational value")
    }

    #[test]
    fn omega_and_psi_of_twelve() {
        let twelve = FieldElement::from_i64(12);
        let omega = ConsistentMap::named(NamedRule::Omega).unwrap();
        let psi = ConsistentMap::named(NamedRule::Psi).unwrap();
        assert_eq!(exact(&phi_eval(&omega, &twelve, &int(1)).unwrap()), int(3));
        assert_eq!(exact(&phi_eval(&psi, &twelve, &int(1)).unwrap()), int(7));
    }

    #[test]
    fn omega_of_sqrt2_is_half() {
        let omega = ConsistentMap::named(NamedRule::Omega).unwrap();
        let v = phi_eval(&omega, &k2().elem_int(0, 1), &int(1)).unwrap();
        assert_eq!(exact(&v), rat(1, 2));
        assert_eq!(v.terms.len(), 3);
    }

    #[test]
    fn lambda_is_in_the_kernel() {
        let lambda = ConsistentMap::lambda(Scalar::Exact(int(1)));
        let seven = phi_eval(&lambda, &FieldElement::from_i64(7), &int(1)).unwrap();
        assert!(seven.value.is_exact());
        assert!(seven.value.to_f64() == 0.0 && seven.value.logs.is_empty());
        let x = k2().elem_int(3, 1);
        assert!(phi_eval(&lambda, &x, &int(1)).unwrap().value.to_f64().abs() < 1e-12);
    }

    #[test]
    fn product_formula_examples() {
        let k = k2();
        let samples = [k.elem_int(3, 1), k.elem_int(1, 1), k.elem(rat(2, 3), rat(-5, 7))];
        for e in product_formula_check(k.as_field(), &samples).unwrap() {
            assert!(e.ok && e.abs <= 1e-12, "{} -> {}", e.x, e.abs);
        }
    }

    #[test]
    fn norm_compatibility_examples() {
        let omega = ConsistentMap::named(NamedRule::Omega).unwrap();
        for x in [k2().elem_int(3, 1), k2().elem_int(0, 1)] {
            let r = norm_compatibility_check(&omega, &x).unwrap();
            assert!(r.exact && r.ok);
            assert_eq!(r.lhs.as_rational(), Some(&rat(1, 2)));
        }
        let zero = ConsistentMap::zero(Field::Rational);
        assert!(norm_compatibility_check(&zero, &k2().elem_int(5, 3)).unwrap().ok);
    }

    #[test]
    fn zero_phi_branches() {
        let lambda = ConsistentMap::lambda(Scalar::Float(2.5));
        let r = zero_phi_classify(&lambda, k2(), 50).unwrap();
        assert!(r.in_kernel && r.consistent());
        assert!((r.r - 2.5).abs() < 1e-12);

        let omega = ConsistentMap::named(NamedRule::Omega).unwrap();
        let r = zero_phi_classify(&omega, k2(), 50).unwrap();
        assert!(!r.in_kernel);
        assert!(r.tests[0].phi.abs() < 1e-12);
        let at2 = r.tests.iter().find(|t| t.label == "2:ram").unwrap();
        assert!((at2.phi - 0.5).abs() < 1e-12);

        let zero = ConsistentMap::zero(Field::Rational);
        let r = zero_phi_classify(&zero, k2(), 50).unwrap();
        assert!(r.in_kernel && r.r == 0.0 && r.consistent());
    }

    #[test]
    fn mismatched_quadratic_fields() {
        let c = ConsistentMap::named(NamedRule::Sqrt2Example).unwrap();
        let x = QuadField::new(3).unwrap().elem_int(1, 1);
        assert!(matches!(phi_eval(&c, &x, &int(1)), Err(Error::UnsupportedFieldPair { .. })));
    }
}
