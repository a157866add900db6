//! Check results and their JSON rendering.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::complex::GradedSpace;
use crate::sigma::CharacterTable;

/// One verified assertion: what was expected, what was computed, and
/// whether they agree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.into(),
            params: BTreeMap::new(),
            expected: Value::Null,
            got: Value::Null,
            pass: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> CheckResult {
        self.params.insert(
            key.into(),
            serde_json::to_value(value).expect("parameters serialize"),
        );
        self
    }

    /// Records both sides and passes iff they are equal.
    pub fn compare(mut self, expected: Value, got: Value) -> CheckResult {
        self.pass = expected == got;
        self.expected = expected;
        self.got = got;
        self
    }

    /// Records both sides with an externally decided outcome.
    pub fn outcome(mut self, expected: Value, got: Value, pass: bool) -> CheckResult {
        self.expected = expected;
        self.got = got;
        self.pass = pass;
        self
    }
}

/// `{"degree": dim}` for the nonzero degrees.
pub fn space_json(s: &GradedSpace) -> Value {
    Value::Object(
        s.iter()
            .map(|(k, d)| (k.to_string(), json!(d)))
            .collect::<Map<_, _>>(),
    )
}

/// `{"degree": {"cycle type": "p/q"}}`.
pub fn character_json(c: &CharacterTable) -> Value {
    let c = c.clone().normalized();
    let mut out = Map::new();
    for (k, row) in &c.values {
        let entries: Map<String, Value> = c
            .cycle_types
            .iter()
            .zip(row)
            .map(|(t, v)| (t.to_string(), Value::String(v.to_string())))
            .collect();
        out.insert(k.to_string(), Value::Object(entries));
    }
    Value::Object(out)
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}
