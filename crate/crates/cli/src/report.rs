//! The versioned report document and its JSON, CSV and plain-text renderings.

use operadkit::report::CheckResult;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CommandKind, Format, RunConfig};

pub const SCHEMA_VERSION: &str = "operadkit-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub config_echo: RunConfig,
    pub results: Vec<CheckResult>,
    pub timing: Value,
}

impl Report {
    pub fn new(config: &RunConfig, results: Vec<CheckResult>, timing: Option<Value>) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: config.command.name(),
            config_echo: config.clone(),
            results,
            timing: timing.unwrap_or(Value::Null),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.config_echo.command == CommandKind::Dims {
            w.write_record(["arity", "dim"]).expect("in-memory csv");
            for r in &self.results {
                let arity = r
                    .params
                    .get("arity")
                    .map(Value::to_string)
                    .unwrap_or_default();
                let dim = r.got.get("dim").map(Value::to_string).unwrap_or_default();
                w.write_record([arity, dim]).expect("in-memory csv");
            }
        } else {
            w.write_record(["name", "params", "expected", "got", "pass"])
                .expect("in-memory csv");
            for r in &self.results {
                let params = serde_json::to_string(&r.params).expect("parameters serialize");
                w.write_record([
                    r.name.clone(),
                    params,
                    r.expected.to_string(),
                    r.got.to_string(),
                    r.pass.to_string(),
                ])
                .expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
    }

    fn pretty(&self) -> String {
        let mut out = format!("{} ({})\n", self.command, self.schema_version);
        for r in &self.results {
            let params: Vec<String> = r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", plain(v)))
                .collect();
            out.push_str(&format!(
                "{} {} {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                params.join(" ")
            ));
            if !r.pass {
                out.push_str(&format!(
                    "  expected: {}\n  got:      {}\n",
                    r.expected, r.got
                ));
            }
        }
        let passed = self.results.iter().filter(|r| r.pass).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.results.len()));
        if !self.timing.is_null() {
            out.push_str(&format!("timing: {}\n", self.timing));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// The path of keys to the first place where `expected` and `got` differ.
fn first_difference(expected: &Value, got: &Value) -> Vec<String> {
    if let (Value::Object(e), Value::Object(g)) = (expected, got) {
        let mut keys: Vec<&String> = e.keys().chain(g.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let (ev, gv) = (
                e.get(k).unwrap_or(&Value::Null),
                g.get(k).unwrap_or(&Value::Null),
            );
            if ev != gv {
                let mut path = vec![k.clone()];
                path.extend(first_difference(ev, gv));
                return path;
            }
        }
    }
    Vec::new()
}

/// The first failing check as a compact record naming the arity and the
/// first differing degree, when those can be identified.
pub fn failure_record(report: &Report) -> Option<Value> {
    let r = report.results.iter().find(|r| !r.pass)?;
    let arity = ["arity", "d", "n"]
        .iter()
        .find_map(|k| r.params.get(*k))
        .cloned()
        .unwrap_or(Value::Null);
    let path = first_difference(&r.expected, &r.got);
    let degree = path
        .iter()
        .find_map(|k| k.parse::<i64>().ok())
        .map_or(Value::Null, |d| json!(d));
    Some(json!({
        "failure": {
            "check": r.name,
            "params": r.params,
            "arity": arity,
            "degree": degree,
            "path": path,
            "expected": r.expected,
            "got": r.got,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_args;

    fn config(args: &str) -> RunConfig {
        parse_args(std::iter::once("operadkit").chain(args.split_whitespace())).unwrap()
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(&config("bar --operad com"), Vec::new(), None);
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["results"], json!([]));
        assert_eq!(v["timing"], Value::Null);
        assert!(r.all_pass());
        assert!(failure_record(&r).is_none());
    }

    #[test]
    fn failing_entry_produces_record() {
        let bad = CheckResult::new("x")
            .param("arity", 3)
            .compare(json!({"homology": {"2": 2}}), json!({"homology": {"2": 1}}));
        let r = Report::new(&config("bar --operad com"), vec![bad], None);
        assert!(!r.all_pass());
        let f = failure_record(&r).unwrap();
        assert_eq!(f["failure"]["arity"], 3);
        assert_eq!(f["failure"]["degree"], 2);
        assert_eq!(f["failure"]["path"], json!(["homology", "2"]));
    }

    #[test]
    fn csv_dims_projection() {
        let rows = (1..=3)
            .map(|n: usize| {
                CheckResult::new("operad_term")
                    .param("arity", n)
                    .compare(json!({"dim": n}), json!({"dim": n}))
            })
            .collect();
        let r = Report::new(&config("dims --operad com"), rows, None);
        assert_eq!(r.render(Format::Csv), "arity,dim\n1,1\n2,2\n3,3\n");
    }
}
