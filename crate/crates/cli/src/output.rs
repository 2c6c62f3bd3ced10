use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
    Plain,
}

/// Rendered command output plus whether the command's checks held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }

    pub fn json(v: &Value) -> Self {
        Self::ok(serde_json::to_string_pretty(v).expect("JSON values always serialize"))
    }

    pub fn with_status(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

/// Line-oriented `key=value`.
#[derive(Default)]
pub struct Plain(Vec<String>);

impl Plain {
    pub fn kv(&mut self, key: impl AsRef<str>, value: impl ToString) -> &mut Self {
        self.0.push(format!("{}={}", key.as_ref(), value.to_string()));
        self
    }

    pub fn line(&mut self, line: String) -> &mut Self {
        self.0.push(line);
        self
    }

    pub fn finish(&self) -> Outcome {
        Outcome::ok(self.0.join("\n"))
    }
}

/// A pipe table.
pub fn markdown_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("| {} |\n", header.join(" | "));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out.pop();
    out
}

/// Plain output for records that have no list structure of their own.
pub fn plain_from_json(v: &Value) -> Outcome {
    let mut p = Plain::default();
    flatten("", v, &mut p);
    p.finish()
}

fn flatten(prefix: &str, v: &Value, out: &mut Plain) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.kv(prefix, items.join(","));
        }
        x => {
            out.kv(prefix, scalar_text(x));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
