//! JSON and text renderings of results. Exact scalars become `"p/q"`
//! strings, floats become shortest round-trip numbers.

use quatpoly::{ConjugacyClass, QPoly, Quaternion, Scalar};
use serde_json::{json, Map, Value};

pub fn scalar<S: Scalar>(x: &S) -> Value {
    match x.to_rational() {
        Some(q) if S::EXACT => Value::String(q.to_string()),
        _ => serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number),
    }
}

pub fn quat<S: Scalar>(q: &Quaternion<S>) -> Value {
    Value::Array(q.components().iter().map(|c| scalar(*c)).collect())
}

pub fn quats<S: Scalar>(qs: &[Quaternion<S>]) -> Value {
    Value::Array(qs.iter().map(quat).collect())
}

pub fn poly<S: Scalar>(p: &QPoly<S>) -> Value {
    json!({ "expr": p.to_string(), "coeffs": quats(p.coeffs()) })
}

pub fn class<S: Scalar>(c: &ConjugacyClass<S>) -> Value {
    json!({ "trace": scalar(&c.trace), "norm2": scalar(&c.norm2), "real": c.is_real })
}

/// A result in both forms, built side by side.
#[derive(Default)]
pub struct Report {
    fields: Map<String, Value>,
    lines: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.to_string(), value);
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("serializable")
        } else {
            self.lines.join("\n")
        }
    }
}

/// Chain `(a1, ..., an)` as `(z - a1)(z - a2)...`.
pub fn chain_text<S: Scalar>(chain: &[Quaternion<S>]) -> String {
    chain.iter().map(|a| format!("(z - ({a}))")).collect::<Vec<_>>().join("")
}
