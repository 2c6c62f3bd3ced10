//! Consistent maps, stored by their base-field data and evaluated lazily.
//!
//! A map is determined by its values `y_v` on the places of one base field
//! (`Q` or a quadratic `K`). Values on a finer field follow
//! `c(L,w) = [L_w:K_v]/[L:K]·y_v`, values on `Q` follow
//! `c(Q,q) = Σ_{w|q} c(K,w)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::numerics::{int, parse_rational, to_f64, Rational};
use crate::places::{self, parse_place, Place, PlaceKind, Splitting};
use crate::primes;
use crate::quadfield::{Field, QuadField};

/// A value `c(K,v)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalValue {
    Rational(Rational),
    /// `q / ln p_v`; only meaningful at non-archimedean places.
    OverLogP(Rational),
    Float(f64),
}

impl LocalValue {
    pub fn zero() -> Self {
        LocalValue::Rational(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, LocalValue::Float(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        match self {
            LocalValue::Rational(q) | LocalValue::OverLogP(q) => q.is_zero(),
            LocalValue::Float(_) => false,
        }
    }

    /// Numeric value; `p` is the prime below the place, needed for `OverLogP`.
    pub fn to_f64(&self, p: Option<u64>) -> f64 {
        match self {
            LocalValue::Rational(q) => to_f64(q),
            LocalValue::OverLogP(q) => {
                let p = p.expect("OverLogP value needs the prime below its place");
                to_f64(q) / (p as f64).ln()
            }
            LocalValue::Float(x) => *x,
        }
    }

    pub fn scale(&self, s: &Scalar, p: Option<u64>) -> LocalValue {
        match (self, s) {
            (LocalValue::Rational(q), Scalar::Exact(t)) => LocalValue::Rational(q * t),
            (LocalValue::OverLogP(q), Scalar::Exact(t)) => LocalValue::OverLogP(q * t),
            _ if s.is_zero() => LocalValue::zero(),
            _ => LocalValue::Float(self.to_f64(p) * s.to_f64()),
        }
    }

    /// Sum of two values at the same place; stays exact when both kinds agree.
    pub fn add(&self, rhs: &LocalValue, p: Option<u64>) -> LocalValue {
        match (self, rhs) {
            (a, b) if b.is_exact_zero() => a.clone(),
            (a, b) if a.is_exact_zero() => b.clone(),
            (LocalValue::Rational(a), LocalValue::Rational(b)) => LocalValue::Rational(a + b),
            (LocalValue::OverLogP(a), LocalValue::OverLogP(b)) => LocalValue::OverLogP(a + b),
            (a, b) => LocalValue::Float(a.to_f64(p) + b.to_f64(p)),
        }
    }

    pub fn neg(&self) -> LocalValue {
        self.scale(&Scalar::Exact(int(-1)), None)
    }

    /// Exact equality when both sides are exact of the same kind, otherwise
    /// `|a − b| ≤ rel_tol·max(1, |a|)`. Returns the comparison and `|a − b|`.
    pub fn compare(&self, rhs: &LocalValue, p: Option<u64>, rel_tol: f64) -> (bool, f64) {
        match (self, rhs) {
            (LocalValue::Rational(a), LocalValue::Rational(b))
            | (LocalValue::OverLogP(a), LocalValue::OverLogP(b)) => {
                let diff = a - b;
                let scale = if matches!(self, LocalValue::OverLogP(_)) {
                    (p.unwrap_or(2) as f64).ln()
                } else {
                    1.0
                };
                (diff.is_zero(), to_f64(&diff).abs() / scale)
            }
            _ if self.is_exact_zero() && rhs.is_exact_zero() => (true, 0.0),
            _ => {
                let (a, b) = (self.to_f64(p), rhs.to_f64(p));
                let diff = (a - b).abs();
                (diff <= rel_tol * a.abs().max(1.0), diff)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            LocalValue::Rational(q) => json!({ "q": q.to_string() }),
            LocalValue::OverLogP(q) => json!({ "q_over_logp": q.to_string() }),
            LocalValue::Float(x) => json!({ "float": x }),
        }
    }

    pub fn from_json(v: &Value) -> Result<LocalValue> {
        let bad = || Error::Parse(format!("not a local value: {v}"));
        let obj = v.as_object().ok_or_else(bad)?;
        if obj.len() != 1 {
            return Err(bad());
        }
        let (key, inner) = obj.iter().next().unwrap();
        let text = || inner.as_str().map(str::to_owned).or_else(|| inner.as_i64().map(|n| n.to_string()));
        match key.as_str() {
            "q" => Ok(LocalValue::Rational(parse_rational(&text().ok_or_else(bad)?)?)),
            "q_over_logp" => Ok(LocalValue::OverLogP(parse_rational(&text().ok_or_else(bad)?)?)),
            "float" => Ok(LocalValue::Float(inner.as_f64().ok_or_else(bad)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for LocalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalValue::Rational(q) => write!(f, "{q}"),
            LocalValue::OverLogP(q) => write!(f, "{q}/log(p)"),
            LocalValue::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A real scalar that stays exact while it can.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + rhs.to_f64()),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * rhs.to_f64()),
        }
    }

    /// Integers print as JSON numbers, other rationals as `{"q": "p/q"}`,
    /// floats as `{"float": x}`.
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Exact(q) if q.is_integer() => match q.to_integer().to_i64() {
                Some(n) => json!(n),
                None => json!({ "q": q.to_string() }),
            },
            Scalar::Exact(q) => json!({ "q": q.to_string() }),
            Scalar::Float(x) => json!({ "float": x }),
        }
    }

    /// Integral JSON numbers are exact; other numbers are floats.
    pub fn from_json(v: &Value) -> Result<Scalar> {
        if let Some(n) = v.as_i64() {
            return Ok(Scalar::Exact(int(n)));
        }
        if let Some(x) = v.as_f64() {
            if x.fract() == 0.0 && x.abs() < 9.0e15 {
                return Ok(Scalar::Exact(int(x as i64)));
            }
            return Ok(Scalar::Float(x));
        }
        match LocalValue::from_json(v)? {
            LocalValue::Rational(q) => Ok(Scalar::Exact(q)),
            LocalValue::Float(x) => Ok(Scalar::Float(x)),
            LocalValue::OverLogP(_) => Err(Error::Parse(format!("not a scalar: {v}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

/// Built-in non-archimedean rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedRule {
    /// `c(Q,p) = −1`, extending `ln`.
    Log,
    /// `c(Q,p) = −1/ln p`, extending `Ω`.
    Omega,
    /// `c(Q,p) = −p/ln p`, extending `Ψ`.
    Psi,
    /// The rational-valued map on `Q(√2)` built from the unit `1+√2`.
    Sqrt2Example,
}

impl NamedRule {
    pub fn name(self) -> &'static str {
        match self {
            NamedRule::Log => "log",
            NamedRule::Omega => "omega",
            NamedRule::Psi => "psi",
            NamedRule::Sqrt2Example => "sqrt2_example",
        }
    }

    pub fn from_name(s: &str) -> Option<NamedRule> {
        Some(match s {
            "log" => NamedRule::Log,
            "omega" => NamedRule::Omega,
            "psi" => NamedRule::Psi,
            "sqrt2_example" => NamedRule::Sqrt2Example,
            _ => return None,
        })
    }
}

/// Values at the non-archimedean places of the base field.
#[derive(Debug, Clone, PartialEq)]
pub enum NonArchRule {
    Zero,
    Named(NamedRule),
    /// Finite support; unlisted places get 0.
    Explicit(BTreeMap<Place, LocalValue>),
    Scaled(Scalar, Box<NonArchRule>),
    Sum(Vec<NonArchRule>),
}

impl NonArchRule {
    fn value(&self, w: &Place) -> Result<LocalValue> {
        let p = w.prime_below();
        Ok(match self {
            NonArchRule::Zero => LocalValue::zero(),
            NonArchRule::Named(rule) => named_value(*rule, w)?,
            NonArchRule::Explicit(m) => m.get(w).cloned().unwrap_or_else(LocalValue::zero),
            NonArchRule::Scaled(s, inner) => inner.value(w)?.scale(s, p),
            NonArchRule::Sum(parts) => {
                let mut acc = LocalValue::zero();
                for r in parts {
                    acc = acc.add(&r.value(w)?, p);
                }
                acc
            }
        })
    }

    fn check_base(&self, base: Field) -> Result<()> {
        match self {
            NonArchRule::Zero => Ok(()),
            NonArchRule::Named(NamedRule::Sqrt2Example) => match base {
                Field::Quadratic(k) if k.d() == 2 => Ok(()),
                _ => Err(Error::InvalidMap(format!("sqrt2_example needs base Q(sqrt(2)), got {base}"))),
            },
            NonArchRule::Named(rule) => match base {
                Field::Rational => Ok(()),
                _ => Err(Error::InvalidMap(format!("rule {} needs base Q, got {base}", rule.name()))),
            },
            NonArchRule::Explicit(m) => {
                for (w, v) in m {
                    if w.field() != base || w.is_archimedean() {
                        return Err(Error::InvalidMap(format!(
                            "explicit entry at {w} is not a finite place of {base}"
                        )));
                    }
                    if let LocalValue::Float(x) = v {
                        if !x.is_finite() {
                            return Err(Error::InvalidMap(format!("non-finite value at {w}")));
                        }
                    }
                }
                Ok(())
            }
            NonArchRule::Scaled(_, inner) => inner.check_base(base),
            NonArchRule::Sum(parts) => parts.iter().try_for_each(|r| r.check_base(base)),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            NonArchRule::Zero => json!("zero"),
            NonArchRule::Named(r) => json!(r.name()),
            NonArchRule::Explicit(m) => {
                let entries: Map<String, Value> =
                    m.iter().map(|(w, v)| (w.to_string(), v.to_json())).collect();
                json!({ "explicit": entries })
            }
            NonArchRule::Scaled(s, inner) => {
                json!({ "scaled": { "by": s.to_json(), "rule": inner.to_json() } })
            }
            NonArchRule::Sum(parts) => {
                json!({ "sum": parts.iter().map(NonArchRule::to_json).collect::<Vec<_>>() })
            }
        }
    }

    fn from_json(v: &Value, base: Field) -> Result<NonArchRule> {
        let bad = || Error::Parse(format!("not a rule: {v}"));
        if let Some(s) = v.as_str() {
            if s == "zero" {
                return Ok(NonArchRule::Zero);
            }
            return NamedRule::from_name(s).map(NonArchRule::Named).ok_or_else(bad);
        }
        let obj = v.as_object().ok_or_else(bad)?;
        if let Some(entries) = obj.get("explicit") {
            let entries = entries.as_object().ok_or_else(bad)?;
            let mut m = BTreeMap::new();
            for (k, val) in entries {
                m.insert(parse_place(k, base)?, LocalValue::from_json(val)?);
            }
            return Ok(NonArchRule::Explicit(m));
        }
        if let Some(inner) = obj.get("scaled") {
            let by = Scalar::from_json(inner.get("by").ok_or_else(bad)?)?;
            let rule = NonArchRule::from_json(inner.get("rule").ok_or_else(bad)?, base)?;
            return Ok(NonArchRule::Scaled(by, Box::new(rule)));
        }
        if let Some(parts) = obj.get("sum") {
            let parts = parts.as_array().ok_or_else(bad)?;
            let parts = parts
                .iter()
                .map(|p| NonArchRule::from_json(p, base))
                .collect::<Result<Vec<_>>>()?;
            return Ok(NonArchRule::Sum(parts));
        }
        Err(bad())
    }
}

fn named_value(rule: NamedRule, w: &Place) -> Result<LocalValue> {
    let p = w.prime_below().expect("non-archimedean place");
    Ok(match rule {
        NamedRule::Log => LocalValue::Rational(int(-1)),
        NamedRule::Omega => LocalValue::OverLogP(int(-1)),
        NamedRule::Psi => LocalValue::OverLogP(-Rational::from_integer(p.into())),
        NamedRule::Sqrt2Example => sqrt2_example_value(w)?,
    })
}

/// `ln(1+√2)`.
pub(crate) fn sqrt2_unit_log() -> f64 {
    std::f64::consts::SQRT_2.ln_1p()
}

/// `(ln|σ₁β_w| − ln|σ₂β_w|)/(ln p·ln(1+√2))` over split primes, 0 elsewhere.
pub(crate) fn sqrt2_example_value(w: &Place) -> Result<LocalValue> {
    match w.kind() {
        PlaceKind::NonArch { p, splitting: Splitting::Split(_) } => {
            let k = w.field().quadratic().expect("place of Q(sqrt(2))");
            let beta = places::ideal_generator(k, w, places::DEFAULT_GENERATOR_BOUND)?;
            let diff = beta.ln_abs_embedding(1)? - beta.ln_abs_embedding(2)?;
            Ok(LocalValue::Float(diff / ((p as f64).ln() * sqrt2_unit_log())))
        }
        _ => Ok(LocalValue::zero()),
    }
}

/// A consistent map given by its base field data.
///
/// `lambda_coeff·λ` is added to every stored value, so `λ` itself is the zero
/// map with `lambda_coeff = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistentMap {
    base: Field,
    arch: Vec<LocalValue>,
    rule: NonArchRule,
    lambda_coeff: Scalar,
}

/// `λ(K,v) = [K_v:Q_v]/[K:Q]`.
pub fn lambda_value(v: &Place) -> Rational {
    Rational::new(v.local_degree().into(), v.field().degree().into())
}

impl ConsistentMap {
    /// The canonical map with the given base values: `arch` lists one value per
    /// archimedean place of `base` (in place order), `rule` the rest.
    pub fn new(base: Field, arch: Vec<LocalValue>, rule: NonArchRule, lambda_coeff: Scalar) -> Result<Self> {
        let expected = base.arch_count();
        if arch.len() != expected {
            return Err(Error::IncompleteArchValues { expected, got: arch.len() });
        }
        if arch.iter().any(|v| matches!(v, LocalValue::OverLogP(_))) {
            return Err(Error::InvalidMap("OverLogP value at an archimedean place".into()));
        }
        rule.check_base(base)?;
        Ok(ConsistentMap { base, arch, rule, lambda_coeff })
    }

    /// The canonical map from `y` on the archimedean places and a rule.
    pub fn canonical_from_y(base: Field, arch: Vec<LocalValue>, rule: NonArchRule) -> Result<Self> {
        Self::new(base, arch, rule, Scalar::zero())
    }

    /// `r·λ`.
    pub fn lambda(r: Scalar) -> Self {
        ConsistentMap {
            base: Field::Rational,
            arch: vec![LocalValue::zero()],
            rule: NonArchRule::Zero,
            lambda_coeff: r,
        }
    }

    pub fn zero(base: Field) -> Self {
        ConsistentMap {
            base,
            arch: vec![LocalValue::zero(); base.arch_count()],
            rule: NonArchRule::Zero,
            lambda_coeff: Scalar::zero(),
        }
    }

    pub fn named(rule: NamedRule) -> Result<Self> {
        let base = match rule {
            NamedRule::Sqrt2Example => Field::Quadratic(QuadField::new(2)?),
            _ => Field::Rational,
        };
        let arch = match rule {
            NamedRule::Sqrt2Example => {
                let y = 1.0 / sqrt2_unit_log();
                vec![LocalValue::Float(y), LocalValue::Float(-y)]
            }
            _ => vec![LocalValue::zero()],
        };
        Self::new(base, arch, NonArchRule::Named(rule), Scalar::zero())
    }

    pub fn base(&self) -> Field {
        self.base
    }

    pub fn arch_values(&self) -> &[LocalValue] {
        &self.arch
    }

    pub fn rule(&self) -> &NonArchRule {
        &self.rule
    }

    pub fn lambda_coeff(&self) -> &Scalar {
        &self.lambda_coeff
    }

    /// Stored value at a place of the base field.
    fn base_value(&self, v: &Place) -> Result<LocalValue> {
        let p = v.prime_below();
        let stored = match v.kind() {
            PlaceKind::RationalInfinity => self.arch[0].clone(),
            PlaceKind::Arch(i) => self.arch[i as usize - 1].clone(),
            _ => self.rule.value(v)?,
        };
        let lam = LocalValue::Rational(lambda_value(v)).scale(&self.lambda_coeff, p);
        Ok(stored.add(&lam, p))
    }

    /// `c(F, v)` for `v` a place of `F`, where `F` is the base field, `Q`, or
    /// a quadratic field over a base of `Q`.
    pub fn evaluate_at(&self, v: &Place) -> Result<LocalValue> {
        let field = v.field();
        if field == self.base {
            return self.base_value(v);
        }
        match (self.base, field) {
            (Field::Rational, Field::Quadratic(_)) => {
                let q = v.below();
                let t = Rational::new(v.local_degree().into(), field.degree().into());
                Ok(self.base_value(&q)?.scale(&Scalar::Exact(t), q.prime_below()))
            }
            (Field::Quadratic(_), Field::Rational) => {
                let mut acc = LocalValue::zero();
                for w in places::places_above(self.base, v) {
                    acc = acc.add(&self.base_value(&w)?, v.prime_below());
                }
                Ok(acc)
            }
            _ => Err(Error::UnsupportedFieldPair {
                base: self.base.to_string(),
                target: field.to_string(),
            }),
        }
    }

    pub fn add(&self, rhs: &ConsistentMap) -> Result<ConsistentMap> {
        if self.base != rhs.base {
            return Err(Error::BaseMismatch(self.base.to_string(), rhs.base.to_string()));
        }
        let arch = self.arch.iter().zip(&rhs.arch).map(|(a, b)| a.add(b, None)).collect();
        let rule = match (&self.rule, &rhs.rule) {
            (NonArchRule::Zero, r) | (r, NonArchRule::Zero) => r.clone(),
            (a, b) => NonArchRule::Sum(vec![a.clone(), b.clone()]),
        };
        Ok(ConsistentMap {
            base: self.base,
            arch,
            rule,
            lambda_coeff: self.lambda_coeff.add(&rhs.lambda_coeff),
        })
    }

    pub fn scale(&self, s: &Scalar) -> ConsistentMap {
        let rule = match &self.rule {
            NonArchRule::Zero => NonArchRule::Zero,
            r => NonArchRule::Scaled(s.clone(), Box::new(r.clone())),
        };
        ConsistentMap {
            base: self.base,
            arch: self.arch.iter().map(|v| v.scale(s, None)).collect(),
            rule,
            lambda_coeff: self.lambda_coeff.mul(s),
        }
    }

    /// `d = c − (c(F,q)/λ(F,q))·λ`, which vanishes at `(F, q)`.
    pub fn normalize_to_jq(&self, q: &Place) -> Result<ConsistentMap> {
        let value = self.evaluate_at(q)?;
        let lam = lambda_value(q);
        let shift = match value {
            LocalValue::Rational(x) => Scalar::Exact(x / lam),
            other => Scalar::Float(other.to_f64(q.prime_below()) / to_f64(&lam)),
        };
        let mut out = self.clone();
        out.lambda_coeff = match (&self.lambda_coeff, &shift) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (a, b) => Scalar::Float(a.to_f64() - b.to_f64()),
        };
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let base = match self.base {
            Field::Rational => json!("Q"),
            Field::Quadratic(k) => json!({ "d": k.d() }),
        };
        json!({
            "base": base,
            "arch": self.arch.iter().map(LocalValue::to_json).collect::<Vec<_>>(),
            "rule": self.rule.to_json(),
            "lambda_coeff": self.lambda_coeff.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<ConsistentMap> {
        let bad = |what: &str| Error::Parse(format!("map JSON: {what}"));
        let base = match v.get("base").ok_or_else(|| bad("missing base"))? {
            Value::String(s) if s == "Q" => Field::Rational,
            b => {
                let d = b.get("d").and_then(Value::as_i64).ok_or_else(|| bad("bad base"))?;
                Field::Quadratic(QuadField::new(d)?)
            }
        };
        let arch = match v.get("arch") {
            Some(a) => a
                .as_array()
                .ok_or_else(|| bad("arch must be a list"))?
                .iter()
                .map(LocalValue::from_json)
                .collect::<Result<Vec<_>>>()?,
            None => vec![LocalValue::zero(); base.arch_count()],
        };
        let rule = match v.get("rule") {
            Some(r) => NonArchRule::from_json(r, base)?,
            None => NonArchRule::Zero,
        };
        let lambda_coeff = match v.get("lambda_coeff") {
            Some(s) => Scalar::from_json(s)?,
            None => Scalar::zero(),
        };
        ConsistentMap::new(base, arch, rule, lambda_coeff)
    }

    pub fn parse(text: &str) -> Result<ConsistentMap> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// One line of a consistency check: `c(Q,q)` against `Σ_{w|q} c(K,w)`.
#[derive(Debug, Clone)]
pub struct ConsistencyEntry {
    pub q: Place,
    pub lhs: LocalValue,
    pub rhs: LocalValue,
    pub diff: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub field: QuadField,
    pub prime_bound: u64,
    pub entries: Vec<ConsistencyEntry>,
}

impl ConsistencyReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConsistencyEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Relative tolerance for float comparisons in the consistency suite.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Checks `c(Q,q) = Σ_{w|q} c(K,w)` for `q = ∞` and every prime `q ≤ prime_bound`.
pub fn check_consistency_suite(c: &ConsistentMap, k: QuadField, prime_bound: u64) -> Result<ConsistencyReport> {
    let mut qs = vec![Place::infinity()];
    qs.extend(primes::primes_up_to(prime_bound).into_iter().map(Place::prime));
    let mut entries = Vec::with_capacity(qs.len());
    for q in qs {
        let lhs = c.evaluate_at(&q)?;
        let mut rhs = LocalValue::zero();
        for w in places::places_above(k.as_field(), &q) {
            rhs = rhs.add(&c.evaluate_at(&w)?, q.prime_below());
        }
        let (ok, diff) = lhs.compare(&rhs, q.prime_below(), CONSISTENCY_TOL);
        entries.push(ConsistencyEntry { q, lhs, rhs, diff, ok });
    }
    Ok(ConsistencyReport { field: k, prime_bound, entries })
}

/// Exact value of `λ(K,v)` as a float-free local value, for convenience.
pub fn lambda_local(v: &Place) -> LocalValue {
    LocalValue::Rational(lambda_value(v))
}
