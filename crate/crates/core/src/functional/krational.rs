use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::numerics::{int, rational_detect, Rational};
use crate::places::{self, parse_place, Place, DEFAULT_GENERATOR_BOUND};
use crate::primes;
use crate::quadfield::QuadField;

use super::regulator_system;

/// Values `y_v`: one per archimedean place, and finite places by label
/// (unlisted finite places count as 0).
#[derive(Debug, Clone, PartialEq)]
pub struct KRationalInput {
    pub arch: Vec<f64>,
    pub nonarch: BTreeMap<Place, f64>,
}

impl KRationalInput {
    /// Reads `{"arch": [..], "nonarch": {"7:split:1": 0.59, ..}}`.
    pub fn from_json(v: &Value, k: QuadField) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("y values: {what}"));
        let arch = v
            .get("arch")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing arch list"))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| bad("arch value must be a number")))
            .collect::<Result<Vec<_>>>()?;
        let mut nonarch = BTreeMap::new();
        if let Some(m) = v.get("nonarch") {
            for (key, x) in m.as_object().ok_or_else(|| bad("nonarch must be an object"))? {
                let w = parse_place(key, k.as_field())?;
                nonarch.insert(w, x.as_f64().ok_or_else(|| bad("value must be a number"))?);
            }
        }
        Ok(KRationalInput { arch, nonarch })
    }
}

/// A quantity that must be rational, and what the detector made of it.
#[derive(Debug, Clone)]
pub struct TestedQuantity {
    pub label: String,
    pub value: f64,
    pub detected: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct KRationalReport {
    pub prime_bound: u64,
    pub max_den: u64,
    pub tol: f64,
    /// Entries of `A·y_arch`.
    pub condition_i: Vec<TestedQuantity>,
    /// `y_v·log‖β_v‖_v + Σ_{u|∞} y_u·log‖β_v‖_u` for each finite place `v`.
    pub condition_ii: Vec<TestedQuantity>,
}

impl KRationalReport {
    /// Whether the parameters can tell rationals from irrationals at all.
    ///
    /// Every real lies within `1/(q·max_den)` of some `p/q` with
    /// `q ≤ max_den`, so when `tol·max_den² ≥ 1` nearly any value is
    /// "detected" and a pass carries little information.
    pub fn discriminating(&self) -> bool {
        self.tol * (self.max_den as f64).powi(2) < 1.0
    }

    pub fn passes(&self) -> bool {
        self.condition_i.iter().chain(&self.condition_ii).all(|q| q.detected.is_some())
    }

    pub fn first_failure(&self) -> Option<&TestedQuantity> {
        self.condition_i.iter().chain(&self.condition_ii).find(|q| q.detected.is_none())
    }

    /// A verdict that states its own limits.
    pub fn verdict(&self) -> String {
        let params = format!(
            "primes <= {}, max denominator {}, tolerance {:e}",
            self.prime_bound, self.max_den, self.tol
        );
        let caveat = if self.discriminating() {
            ""
        } else {
            "; warning: tol*max_den^2 >= 1, so almost every real passes the detector"
        };
        match self.first_failure() {
            None => format!("passes up to prime_bound with parameters ({params}){caveat}"),
            Some(q) => format!("fails at {} = {} ({params}){caveat}", q.label, q.value),
        }
    }
}

/// Bounded check of the two rationality conditions for `y`: every entry of
/// `A·y_arch` and every finite-place quantity must be close to a rational with
/// small denominator.
pub fn krational_check(
    k: QuadField,
    y: &KRationalInput,
    prime_bound: u64,
    max_den: u64,
    tol: f64,
) -> Result<KRationalReport> {
    let field = k.as_field();
    let arch = places::arch_places(field);
    if y.arch.len() != arch.len() {
        return Err(Error::IncompleteArchValues { expected: arch.len(), got: y.arch.len() });
    }
    let test = |label: String, value: f64| TestedQuantity {
        label,
        value,
        detected: rational_detect(value, max_den, tol),
    };
    let mut condition_i = Vec::new();
    if k.is_real() {
        let sys = regulator_system(k)?;
        for (i, row) in sys.matrix_a.iter().enumerate() {
            let value: f64 = row.iter().zip(&y.arch).map(|(a, b)| a * b).sum();
            condition_i.push(test(format!("(A*y)[{}]", i + 1), value));
        }
    }
    let mut condition_ii = Vec::new();
    for p in primes::primes_up_to(prime_bound) {
        for w in places::places_over_prime(field, p) {
            let beta = places::ideal_generator(k, &w, DEFAULT_GENERATOR_BOUND)?;
            let mut value = y.nonarch.get(&w).copied().unwrap_or(0.0)
                * places::log_abs(&beta, &w, &int(1))?.to_f64();
            for (u, yu) in arch.iter().zip(&y.arch) {
                value += yu * places::log_abs(&beta, u, &int(1))?.to_f64();
            }
            condition_ii.push(test(w.to_string(), value));
        }
    }
    Ok(KRationalReport { prime_bound, max_den, tol, condition_i, condition_ii })
}
