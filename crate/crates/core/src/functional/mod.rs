//! Realizing a prescribed functional on an S-unit basis by a consistent map.
//!
//! For a real quadratic `K` with fundamental unit `ε` the archimedean values
//! `y = (y₁, y₂)` solve `A·y = Φ(ε)` and `y₁ + y₂ = r`, where
//! `A = [ln|σ₁ε|, ln|σ₂ε|]`. Each finite place `w` with prime generator `β_w`
//! then gets
//!
//! ```text
//! y_w = (Φ(β_w) − Σ_{v|∞} y_v·log‖β_w‖_v) / log‖β_w‖_w.
//! ```

mod example;
mod krational;
mod sunit;

pub use example::{sqrt2_arch_value, sqrt2_example, Sqrt2Row, Sqrt2Table, REFERENCE_ROWS};
pub use krational::{krational_check, KRationalInput, KRationalReport, TestedQuantity};
pub use sunit::{sunit_decompose, SUnitBasis, SUnitDecomposition};

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::consistent::{lambda_value, ConsistentMap, LocalValue, NonArchRule, Scalar};
use crate::error::{Error, Result};
use crate::numerics::{int, Rational};
use crate::places::{self, parse_place, Place, DEFAULT_GENERATOR_BOUND};
use crate::primes;
use crate::quadfield::{FieldElement, QuadField};

/// Determinants below this are treated as singular.
pub const SINGULAR_DET: f64 = 1e-14;

/// Unit-log matrix of a real quadratic field.
#[derive(Debug, Clone)]
pub struct RegulatorSystem {
    pub field: QuadField,
    pub unit: FieldElement,
    /// One row per fundamental unit, one column per archimedean place.
    pub matrix_a: Vec<Vec<f64>>,
    pub lambda: Vec<Rational>,
}

impl RegulatorSystem {
    pub fn regulator(&self) -> f64 {
        self.matrix_a[0][0].abs()
    }
}

pub fn regulator_system(k: QuadField) -> Result<RegulatorSystem> {
    let unit = k.fundamental_unit()?;
    let row = vec![unit.ln_abs_embedding(1)?, unit.ln_abs_embedding(2)?];
    let lambda = places::arch_places(k.as_field()).iter().map(lambda_value).collect();
    Ok(RegulatorSystem { field: k, unit, matrix_a: vec![row], lambda })
}

/// Targets for `Φ` on an S-unit basis, plus `r = c(Q,∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSpec {
    pub field: QuadField,
    pub r: f64,
    /// `Φ(ε)`; empty for imaginary fields.
    pub unit_targets: Vec<f64>,
    /// `Φ(β_w)`; places left out get target 0.
    pub generator_targets: BTreeMap<Place, f64>,
}

impl FunctionalSpec {
    pub fn zero(field: QuadField, r: f64) -> Self {
        let units = if field.is_real() { 1 } else { 0 };
        FunctionalSpec { field, r, unit_targets: vec![0.0; units], generator_targets: BTreeMap::new() }
    }

    pub fn generator_target(&self, w: &Place) -> f64 {
        self.generator_targets.get(w).copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> Value {
        let targets: Map<String, Value> =
            self.generator_targets.iter().map(|(w, t)| (w.to_string(), json!(t))).collect();
        json!({
            "d": self.field.d(),
            "r": self.r,
            "unit_targets": self.unit_targets,
            "generator_targets": targets,
        })
    }

    /// Reads `{"d": 2, "r": 0, "unit_targets": [..], "generator_targets": {..}}`;
    /// `d` defaults to 2 and missing targets to 0.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("functional spec: {what}"));
        let d = match v.get("d") {
            Some(d) => d.as_i64().ok_or_else(|| bad("d must be an integer"))?,
            None => 2,
        };
        let field = QuadField::new(d)?;
        let r = match v.get("r") {
            Some(r) => r.as_f64().ok_or_else(|| bad("r must be a number"))?,
            None => 0.0,
        };
        let expected = if field.is_real() { 1 } else { 0 };
        let unit_targets = match v.get("unit_targets") {
            Some(u) => u
                .as_array()
                .ok_or_else(|| bad("unit_targets must be a list"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("unit target must be a number")))
                .collect::<Result<Vec<_>>>()?,
            None => vec![0.0; expected],
        };
        if unit_targets.len() != expected {
            return Err(bad(&format!("expected {expected} unit targets, got {}", unit_targets.len())));
        }
        let mut generator_targets = BTreeMap::new();
        if let Some(g) = v.get("generator_targets") {
            for (key, t) in g.as_object().ok_or_else(|| bad("generator_targets must be an object"))? {
                let w = parse_place(key, field.as_field())?;
                if w.is_archimedean() {
                    return Err(bad(&format!("{key} is archimedean")));
                }
                let t = t.as_f64().ok_or_else(|| bad("generator target must be a number"))?;
                generator_targets.insert(w, t);
            }
        }
        Ok(FunctionalSpec { field, r, unit_targets, generator_targets })
    }
}

/// The archimedean values: the unique `y` with `A·y = unit_targets` and
/// `Σ y = r`. Imaginary fields have no units and a single place, so `y = (r)`.
pub fn solve_arch_y(k: QuadField, spec: &FunctionalSpec) -> Result<Vec<f64>> {
    if !k.is_real() {
        return Ok(vec![spec.r]);
    }
    let sys = regulator_system(k)?;
    solve_regulator(&sys, spec.unit_targets[0], spec.r)
}

/// Cramer's rule on `[[L₁, L₂], [1, 1]]·y = [b, r]`.
pub fn solve_regulator(sys: &RegulatorSystem, b: f64, r: f64) -> Result<Vec<f64>> {
    let (l1, l2) = (sys.matrix_a[0][0], sys.matrix_a[0][1]);
    let det = l1 - l2;
    if det.abs() < SINGULAR_DET {
        return Err(Error::SingularSystem(det));
    }
    Ok(vec![(b - l2 * r) / det, (l1 * r - b) / det])
}

/// `y_w = (target − Σ_{v|∞} y_v·log‖β‖_v) / log‖β‖_w`.
pub fn nonarch_y(arch_y: &[f64], beta: &FieldElement, w: &Place, target: f64) -> Result<f64> {
    let field = w.field();
    let arch = places::arch_places(field);
    if arch.len() != arch_y.len() {
        return Err(Error::IncompleteArchValues { expected: arch.len(), got: arch_y.len() });
    }
    let mut numerator = target;
    for (v, y) in arch.iter().zip(arch_y) {
        numerator -= y * places::log_abs(beta, v, &int(1))?.to_f64();
    }
    let denominator = places::log_abs(beta, w, &int(1))?;
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator(w.to_string()));
    }
    Ok(numerator / denominator.to_f64())
}

/// The consistent map based at `K` realizing `spec` on the fundamental unit
/// and on the generators over primes up to `prime_bound`.
///
/// Places over larger primes get value 0, which fixes `Φ(β_w) = Σ_{v|∞} y_v·log‖β_w‖_v` there.
pub fn build_map_from_functional(spec: &FunctionalSpec, prime_bound: u64) -> Result<ConsistentMap> {
    let k = spec.field;
    let arch_y = solve_arch_y(k, spec)?;
    let mut values = BTreeMap::new();
    for p in primes::primes_up_to(prime_bound) {
        for w in places::places_over_prime(k.as_field(), p) {
            let beta = places::ideal_generator(k, &w, DEFAULT_GENERATOR_BOUND)?;
            let y = nonarch_y(&arch_y, &beta, &w, spec.generator_target(&w))?;
            values.insert(w, LocalValue::Float(y));
        }
    }
    ConsistentMap::new(
        k.as_field(),
        arch_y.into_iter().map(LocalValue::Float).collect(),
        NonArchRule::Explicit(values),
        Scalar::zero(),
    )
}
