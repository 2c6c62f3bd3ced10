use std::io::Read;
use std::path::Path;

use cmap_core::arith::{self, AdditiveKind};
use cmap_core::consistent::{check_consistency_suite, lambda_value};
use cmap_core::functional::{
    build_map_from_functional, krational_check, sqrt2_example, sunit_decompose, FunctionalSpec,
    KRationalInput, SUnitBasis,
};
use cmap_core::numerics::{int, parse_rational, to_f64, LogLinear};
use cmap_core::phi::{norm_compatibility_check, phi_eval, product_formula_check, zero_phi_classify, PhiValue};
use cmap_core::places::{self, SplittingType, DEFAULT_GENERATOR_BOUND};
use cmap_core::primes;
use cmap_core::quadfield::parse_element;
use cmap_core::{ConsistentMap, Error, Field, FieldElement, NamedRule, Place, QuadField, Scalar};
use serde_json::{json, Map, Value};

use crate::output::{markdown_table, plain_from_json, Format, Outcome, Plain};
use crate::{Cli, Command, Failure, Kind, Suite};

type Run = Result<Outcome, Failure>;

pub fn run(cli: &Cli) -> Run {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::FieldInfo { d } => field_info(*d, fmt(Format::Plain)),
        Command::Split { d, p } => split(*d, *p, fmt(Format::Plain)),
        Command::Unit { d } => unit(*d, fmt(Format::Plain)),
        Command::Generator { d, p } => generator(*d, *p, fmt(Format::Plain)),
        Command::EvalPhi { map, alpha, pow, d } => {
            let c = read_map(map)?;
            eval(&c, alpha, pow, *d, fmt(Format::Json))
        }
        Command::Extend { kind } => {
            let c = arith::build_extension(additive(*kind));
            Ok(show_map(&c, cli.bound, fmt(Format::Json)))
        }
        Command::ExtendEval { kind, alpha, pow, d } => {
            eval(&arith::build_extension(additive(*kind)), alpha, pow, *d, fmt(Format::Json))
        }
        Command::Check { suite, d } => check(cli, *suite, *d, fmt(Format::Plain)),
        Command::Sqrt2Table => sqrt2_table(cli.bound, fmt(Format::Plain)),
        Command::BuildFunctional { spec } => {
            let v = read_json(spec)?;
            let spec = FunctionalSpec::from_json(&v)?;
            let c = build_map_from_functional(&spec, cli.bound)?;
            Ok(show_map(&c, cli.bound, fmt(Format::Json)))
        }
        Command::Decompose { d, alpha, primes } => decompose(*d, alpha, primes, fmt(Format::Plain)),
        Command::Krational { d, y } => krational(cli, *d, y, fmt(Format::Plain)),
    }
}

fn additive(kind: Kind) -> AdditiveKind {
    match kind {
        Kind::Omega => AdditiveKind::Omega,
        Kind::Psi => AdditiveKind::Psi,
        Kind::Log => AdditiveKind::Log,
    }
}

fn read_source(src: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if src.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(src)
            .map_err(|e| Failure::Usage(format!("reading {}: {e}", src.display())))?;
    }
    Ok(text)
}

fn read_json(src: &Path) -> Result<Value, Failure> {
    let text = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(e.to_string())))
}

/// A map from `-`, a built-in name, inline JSON, or a file.
fn read_map(src: &str) -> Result<ConsistentMap, Failure> {
    if src == "lambda" {
        return Ok(ConsistentMap::lambda(Scalar::Exact(int(1))));
    }
    if let Some(rule) = NamedRule::from_name(src) {
        return Ok(ConsistentMap::named(rule)?);
    }
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        read_source(Path::new(src))?
    };
    Ok(ConsistentMap::parse(&text)?)
}

fn field(d: i64) -> Result<QuadField, Failure> {
    Ok(QuadField::new(d)?)
}

fn prime(p: u64) -> Result<u64, Failure> {
    if primes::is_prime(p) {
        Ok(p)
    } else {
        Err(Failure::Domain(Error::NotPrime(p)))
    }
}

fn render(v: Value, fmt: Format) -> Outcome {
    match fmt {
        Format::Json => Outcome::json(&v),
        _ => plain_from_json(&v),
    }
}

fn field_info(d: i64, fmt: Format) -> Run {
    let k = field(d)?;
    let mut v = json!({
        "d": d,
        "field": k.to_string(),
        "discriminant": k.discriminant(),
        "real": k.is_real(),
        "omega": k.omega().to_string(),
        "torsion_order": k.torsion_order(),
    });
    if k.is_real() {
        let eps = k.fundamental_unit()?;
        v["fundamental_unit"] = json!(eps.to_string());
        v["unit_norm"] = json!(eps.norm().to_string());
        v["regulator"] = json!(eps.ln_abs_embedding(1)?.abs());
    }
    Ok(render(v, fmt))
}

fn split(d: i64, p: u64, fmt: Format) -> Run {
    let k = field(d)?;
    let p = prime(p)?;
    let kind = match places::splitting_type(k, p) {
        SplittingType::Split => "split",
        SplittingType::Inert => "inert",
        SplittingType::Ramified => "ramified",
    };
    let ws = places::places_over_prime(k.as_field(), p);
    let rows: Vec<Value> = ws
        .iter()
        .map(|w| {
            json!({
                "place": w.to_string(),
                "e": w.ramification_index(),
                "f": w.residue_degree(),
                "local_degree": w.local_degree(),
                "lambda": lambda_value(w).to_string(),
            })
        })
        .collect();
    match fmt {
        Format::Json => Ok(Outcome::json(&json!({ "d": d, "p": p, "splitting": kind, "places": rows }))),
        Format::Markdown => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| ["place", "e", "f", "local_degree", "lambda"].iter().map(|k| text(&r[*k])).collect())
                .collect();
            Ok(Outcome::ok(markdown_table(&["place", "e", "f", "[K_w:Q_p]", "lambda"], &body)))
        }
        Format::Plain => {
            let mut out = Plain::default();
            out.kv("splitting", kind);
            for r in &rows {
                out.line(format!(
                    "place={} e={} f={} local_degree={} lambda={}",
                    text(&r["place"]),
                    r["e"],
                    r["f"],
                    r["local_degree"],
                    text(&r["lambda"])
                ));
            }
            Ok(out.finish())
        }
    }
}

fn text(v: &Value) -> String {
    v.as_str().map(str::to_owned).unwrap_or_else(|| v.to_string())
}

fn unit(d: i64, fmt: Format) -> Run {
    let k = field(d)?;
    let eps = k.fundamental_unit()?;
    match fmt {
        // a single value, so plain output is the bare element
        Format::Plain => Ok(Outcome::ok(eps.to_string())),
        _ => Ok(render(json!({ "d": d, "unit": eps.to_string(), "norm": eps.norm().to_string() }), fmt)),
    }
}

fn generator(d: i64, p: u64, fmt: Format) -> Run {
    let k = field(d)?;
    let p = prime(p)?;
    let mut gens = Map::new();
    for w in places::places_over_prime(k.as_field(), p) {
        let beta = places::ideal_generator(k, &w, DEFAULT_GENERATOR_BOUND)?;
        gens.insert(w.to_string(), json!(beta.to_string()));
    }
    match fmt {
        Format::Json => Ok(Outcome::json(&json!({ "d": d, "p": p, "generators": gens }))),
        _ => Ok(plain_from_json(&Value::Object(gens))),
    }
}

fn parse_alpha(alpha: &str, d: Option<i64>) -> Result<FieldElement, Failure> {
    let context = d.map(field).transpose()?;
    Ok(parse_element(alpha, context)?)
}

fn eval(c: &ConsistentMap, alpha: &str, pow: &str, d: Option<i64>, fmt: Format) -> Run {
    let x = parse_alpha(alpha, d)?;
    let e = parse_rational(pow)?;
    let phi = phi_eval(c, &x, &e)?;
    let v = phi_json(&phi);
    match fmt {
        Format::Json => Ok(Outcome::json(&v)),
        Format::Plain => {
            let mut out = Plain::default();
            out.kv("value", &phi.value).kv("value_float", phi.value.to_f64());
            for t in &phi.terms {
                out.line(format!("term={} coeff={} logabs={}", t.place, t.coeff, t.logabs.to_f64()));
            }
            Ok(out.finish())
        }
        Format::Markdown => {
            let rows: Vec<Vec<String>> = phi
                .terms
                .iter()
                .map(|t| vec![t.place.to_string(), t.coeff.to_string(), t.logabs.to_f64().to_string()])
                .collect();
            let table = markdown_table(&["place", "c(K,v)", "log|alpha|_v"], &rows);
            Ok(Outcome::ok(format!("{table}\n\nPhi = {} ~ {}", phi.value, phi.value.to_f64())))
        }
    }
}

fn exact_json(v: &LogLinear) -> Value {
    if !v.is_exact() {
        return Value::Null;
    }
    let logs: Map<String, Value> = v.logs.iter().map(|(p, q)| (p.to_string(), json!(q.to_string()))).collect();
    json!({ "rational": v.rational.to_string(), "log_terms": logs })
}

fn phi_json(phi: &PhiValue) -> Value {
    let terms: Vec<Value> = phi
        .terms
        .iter()
        .map(|t| json!({ "place": t.place.to_string(), "coeff": t.coeff.to_json(), "logabs": t.logabs.to_f64() }))
        .collect();
    json!({
        "value_exact": exact_json(&phi.value),
        "value_float": phi.value.to_f64(),
        "terms": terms,
    })
}

/// Places of the map's base field over `∞` and the primes up to `bound`.
fn base_places(base: Field, bound: u64) -> Vec<Place> {
    let mut out = places::arch_places(base);
    for p in primes::primes_up_to(bound) {
        out.extend(places::places_over_prime(base, p));
    }
    out
}

fn show_map(c: &ConsistentMap, bound: u64, fmt: Format) -> Outcome {
    if fmt == Format::Json {
        return Outcome::json(&c.to_json());
    }
    let mut rows = Vec::new();
    for v in base_places(c.base(), bound) {
        match c.evaluate_at(&v) {
            Ok(x) => rows.push(vec![v.to_string(), x.to_string(), x.to_f64(v.prime_below()).to_string()]),
            Err(e) => rows.push(vec![v.to_string(), format!("error: {e}"), String::new()]),
        }
    }
    match fmt {
        Format::Markdown => Outcome::ok(markdown_table(&["place", "c(K,v)", "approx"], &rows)),
        _ => {
            let mut out = Plain::default();
            out.kv("base", c.base());
            for r in rows {
                out.kv(&r[0], &r[1]);
            }
            out.finish()
        }
    }
}

/// Counts and the first failing instance of a check suite.
struct SuiteResult {
    checked: usize,
    violations: Vec<String>,
    notes: Vec<String>,
}

impl SuiteResult {
    fn new() -> Self {
        SuiteResult { checked: 0, violations: Vec::new(), notes: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn check(cli: &Cli, suite: Suite, d: i64, fmt: Format) -> Run {
    let k = field(d)?;
    let bound = cli.bound;
    let mut r = SuiteResult::new();
    let name = match suite {
        Suite::ProductFormula => {
            check_product_formula(k, cli.tol, &mut r)?;
            "product-formula"
        }
        Suite::Consistency => {
            check_consistency(k, bound, &mut r)?;
            "consistency"
        }
        Suite::Kernel => {
            check_kernel(k, bound, &mut r)?;
            "kernel"
        }
        Suite::Extensions => {
            check_extensions(k, bound, &mut r)?;
            "extensions"
        }
        Suite::LocalGlobal => {
            check_local_global(k, bound, &mut r);
            "local-global"
        }
    };
    let ok = r.violations.is_empty();
    let v = json!({
        "suite": name,
        "d": d,
        "bound": bound,
        "checked": r.checked,
        "violations": r.violations.len(),
        "status": if ok { "pass" } else { "fail" },
        "first_violation": r.violations.first(),
        "notes": r.notes,
    });
    Ok(match fmt {
        Format::Json => Outcome::json(&v),
        _ => {
            let mut out = Plain::default();
            for key in ["suite", "d", "bound", "checked", "violations", "status"] {
                out.kv(key, text(&v[key]));
            }
            if let Some(first) = r.violations.first() {
                out.kv("first_violation", first);
            }
            for n in &r.notes {
                out.kv("note", n);
            }
            out.finish()
        }
    }
    .with_status(ok))
}

/// Every nonzero `a+b√d` with `|a|, |b| ≤ size`.
fn grid(k: QuadField, size: i64) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for a in -size..=size {
        for b in -size..=size {
            if a != 0 || b != 0 {
                out.push(k.elem_int(a, b));
            }
        }
    }
    out
}

fn check_product_formula(k: QuadField, tol: f64, r: &mut SuiteResult) -> Result<(), Failure> {
    for e in product_formula_check(k.as_field(), &grid(k, 10))? {
        r.record(e.abs <= tol, || format!("x={} sum={:e}", e.x, e.value.to_f64()));
    }
    Ok(())
}

fn check_consistency(k: QuadField, bound: u64, r: &mut SuiteResult) -> Result<(), Failure> {
    let mut maps = vec![("lambda", ConsistentMap::lambda(Scalar::Exact(int(1))))];
    for rule in [NamedRule::Omega, NamedRule::Psi, NamedRule::Log] {
        maps.push((rule.name(), ConsistentMap::named(rule)?));
    }
    if k.d() == 2 {
        maps.push(("sqrt2_example", ConsistentMap::named(NamedRule::Sqrt2Example)?));
    }
    for (name, c) in &maps {
        for e in check_consistency_suite(c, k, bound)?.entries {
            r.record(e.ok, || format!("map={name} q={} c(Q,q)={} sum={} diff={:e}", e.q, e.lhs, e.rhs, e.diff));
        }
    }
    Ok(())
}

fn check_kernel(k: QuadField, bound: u64, r: &mut SuiteResult) -> Result<(), Failure> {
    for t in [-2.0, 1.0, 3.5] {
        let lam = ConsistentMap::lambda(Scalar::Float(t));
        let rep = zero_phi_classify(&lam, k, bound)?;
        for test in &rep.tests {
            r.record(test.phi.abs() <= 1e-9, || format!("{t}*lambda: Phi({}) = {:e}", test.element, test.phi));
        }
        r.record(rep.consistent(), || format!("{t}*lambda: a place value differs from r*lambda"));
        if !rep.skipped.is_empty() && r.notes.is_empty() {
            let skipped: Vec<String> = rep.skipped.iter().map(Place::to_string).collect();
            r.notes.push(format!("no generator found at {}", skipped.join(",")));
        }
        if rep.skipped.is_empty() {
            let c = build_map_from_functional(&FunctionalSpec::zero(k, t), bound)?;
            for v in base_places(k.as_field(), bound) {
                let got = c.evaluate_at(&v)?.to_f64(v.prime_below());
                let want = t * to_f64(&lambda_value(&v));
                r.record((got - want).abs() <= 1e-12, || format!("zero targets, r={t}: c({v})={got}, expected {want}"));
            }
        }
    }
    // a map outside the kernel must be reported as such
    let omega = ConsistentMap::named(NamedRule::Omega)?;
    let rep = zero_phi_classify(&omega, k, bound)?;
    r.record(!rep.in_kernel, || "omega extension classified as having Phi = 0".into());
    Ok(())
}

fn check_extensions(k: QuadField, bound: u64, r: &mut SuiteResult) -> Result<(), Failure> {
    let omega = arith::build_extension(AdditiveKind::Omega);
    let psi = arith::build_extension(AdditiveKind::Psi);
    let log = arith::build_extension(AdditiveKind::Log);
    let one = int(1);
    for n in 2..=bound as i64 {
        let x = FieldElement::from_i64(n);
        let q = int(n);
        let got = phi_eval(&omega, &x, &one)?.value;
        let want = arith::omega(&q)?;
        r.record(got.as_rational() == Some(&want), || format!("Omega({n}): got {got}, expected {want}"));
        let got = phi_eval(&psi, &x, &one)?.value;
        let want = arith::psi(&q)?;
        r.record(got.as_rational() == Some(&want), || format!("Psi({n}): got {got}, expected {want}"));
        let got = phi_eval(&log, &x, &one)?.value;
        let ok = got.is_exact()
            && got.rational == int(0)
            && primes::factor(q.numer())?.iter().all(|(p, e)| got.logs.get(p) == Some(&int(*e as i64)))
            && got.logs.len() == primes::factor(q.numer())?.len();
        r.record(ok, || format!("log({n}): got {got}"));
    }
    for x in grid(k, 6) {
        let c = norm_compatibility_check(&omega, &x)?;
        r.record(c.ok, || format!("Phi_Omega({x}) = {} but Omega(N(x))/2 = {}", c.lhs, c.rhs));
    }
    Ok(())
}

fn check_local_global(k: QuadField, bound: u64, r: &mut SuiteResult) {
    let field = k.as_field();
    let mut qs = vec![Place::infinity()];
    qs.extend(primes::primes_up_to(bound).into_iter().map(Place::prime));
    for q in qs {
        let sum = places::local_degree_sum(field, &q);
        r.record(sum == 2, || format!("q={q}: sum of local degrees {sum}"));
        let lam: cmap_core::Rational = places::places_above(field, &q).iter().map(lambda_value).sum();
        r.record(lam == int(1), || format!("q={q}: sum of lambda {lam}"));
    }
}

fn pretty(beta: &FieldElement) -> String {
    let b = beta.b();
    let (sign, b) = if *b < int(0) { ('-', -b) } else { ('+', b.clone()) };
    let coeff = if b == int(1) { String::new() } else { b.to_string() };
    format!("{}{sign}{coeff}√2", beta.a())
}

fn sqrt2_table(bound: u64, fmt: Format) -> Run {
    let t = sqrt2_example(bound)?;
    let ok = t.antisymmetric && t.vanishes_on_q;
    let out = match fmt {
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "p": r.p.map_or(json!("inf"), |p| json!(p)),
                        "beta": r.beta.as_ref().map_or(Value::Null, |b| json!(b.to_string())),
                        "c": r.c,
                    })
                })
                .collect();
            Outcome::json(&json!({
                "rows": rows,
                "antisymmetric": t.antisymmetric,
                "vanishes_on_q": t.vanishes_on_q,
                "notes": t.notes,
            }))
        }
        Format::Markdown => {
            let rows: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| match (&r.p, &r.beta) {
                    (Some(p), Some(b)) => {
                        vec![p.to_string(), format!("({})({})", pretty(b), pretty(&b.conj())), format!("±{:.6}", r.c.abs())]
                    }
                    _ => vec!["∞".into(), "NA".into(), format!("±{:.6}", r.c.abs())],
                })
                .collect();
            let mut s = markdown_table(&["p", "factorization of p in Z[√2]", "c(K,v) for v | p"], &rows);
            for n in &t.notes {
                s.push_str(&format!("\n\nNote: {n}"));
            }
            Outcome::ok(s)
        }
        Format::Plain => {
            let mut out = Plain::default();
            for r in &t.rows {
                let p = r.p.map_or("inf".to_string(), |p| p.to_string());
                let beta = r.beta.as_ref().map_or("NA".to_string(), FieldElement::to_string);
                out.line(format!("p={p} place={} beta={beta} c={} c_conj={}", r.place, r.c, r.c_conj));
            }
            out.kv("antisymmetric", t.antisymmetric).kv("vanishes_on_q", t.vanishes_on_q);
            for n in &t.notes {
                out.kv("note", n);
            }
            out.finish()
        }
    };
    Ok(out.with_status(ok))
}

fn decompose(d: i64, alpha: &str, ps: &[u64], fmt: Format) -> Run {
    let k = field(d)?;
    let x = parse_alpha(alpha, Some(d))?;
    let basis = SUnitBasis::new(k, ps, DEFAULT_GENERATOR_BOUND)?;
    let dec = sunit_decompose(&x, &basis)?;
    let gens: Map<String, Value> = dec
        .generator_exponents
        .iter()
        .map(|(w, s)| (w.to_string(), json!(s.to_string())))
        .collect();
    let beta: Map<String, Value> =
        basis.generators.iter().map(|(w, b)| (w.to_string(), json!(b.to_string()))).collect();
    let v = json!({
        "alpha": x.to_string(),
        "unit": basis.unit.as_ref().map(FieldElement::to_string),
        "unit_exponents": dec.unit_exponents.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "generators": beta,
        "generator_exponents": gens,
        "torsion": dec.torsion.to_string(),
    });
    Ok(render(v, fmt))
}

fn krational(cli: &Cli, d: i64, y: &Path, fmt: Format) -> Run {
    let k = field(d)?;
    let input = KRationalInput::from_json(&read_json(y)?, k)?;
    let rep = krational_check(k, &input, cli.bound, cli.max_den, cli.tol)?;
    let quantity = |q: &cmap_core::functional::TestedQuantity| {
        json!({
            "label": q.label,
            "value": q.value,
            "detected": q.detected.as_ref().map(|r| r.to_string()),
        })
    };
    let v = json!({
        "d": d,
        "prime_bound": rep.prime_bound,
        "max_den": rep.max_den,
        "tol": rep.tol,
        "discriminating": rep.discriminating(),
        "passes": rep.passes(),
        "verdict": rep.verdict(),
        "condition_i": rep.condition_i.iter().map(quantity).collect::<Vec<_>>(),
        "first_failure": rep.first_failure().map(quantity),
    });
    let out = match fmt {
        Format::Json => Outcome::json(&v),
        _ => {
            let mut out = Plain::default();
            for key in ["d", "prime_bound", "max_den", "tol", "discriminating", "passes", "verdict"] {
                out.kv(key, text(&v[key]));
            }
            for q in &rep.condition_i {
                out.kv(&q.label, detected_text(q));
            }
            if let Some(q) = rep.first_failure() {
                out.kv("first_failure", format!("{} value={}", q.label, q.value));
            }
            out.finish()
        }
    };
    Ok(out.with_status(rep.passes()))
}

fn detected_text(q: &cmap_core::functional::TestedQuantity) -> String {
    match &q.detected {
        Some(r) => format!("{} ~ {r}", q.value),
        None => format!("{} (not rational)", q.value),
    }
}
