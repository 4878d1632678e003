use serde_json::{Map, Value as Json, json};

use super::{OutputFormat, SCHEMA};
use crate::oracles::VerificationReport;
use crate::{Rational, rational_to_f64};

pub fn rational_json(q: &Rational) -> Json {
    json!({
        "num": q.numer().to_string(),
        "den": q.denom().to_string(),
        "approx": finite_or_null(rational_to_f64(q)),
    })
}

fn finite_or_null(x: f64) -> Json {
    if x.is_finite() { json!(x) } else { Json::Null }
}

/// One value per `(n, k, m)` point of a sweep.
#[derive(Clone, Debug)]
pub struct Row {
    pub n: usize,
    pub k: u64,
    pub m: Option<u64>,
    pub value: Rational,
}

impl Row {
    pub fn new(n: usize, k: u64, m: Option<u64>, value: Rational) -> Self {
        Row { n, k, m, value }
    }

    fn json(&self) -> Json {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n));
        obj.insert("k".into(), json!(self.k));
        if let Some(m) = self.m {
            obj.insert("m".into(), json!(m));
        }
        obj.insert("value".into(), rational_json(&self.value));
        Json::Object(obj)
    }
}

/// Collected command output, rendered once in the requested format.
#[derive(Debug)]
pub struct Output {
    command: &'static str,
    inputs: Map<String, Json>,
    result: Map<String, Json>,
    rows: Option<Vec<Row>>,
    text: Vec<String>,
    csv_header: Vec<String>,
    csv_rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(command: &'static str) -> Self {
        Output {
            command,
            inputs: Map::new(),
            result: Map::new(),
            rows: None,
            text: Vec::new(),
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: Json) {
        self.inputs.insert(key.into(), value);
    }

    pub fn result(&mut self, key: &str, value: Json) {
        self.result.insert(key.into(), value);
    }

    pub fn text_line(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    pub fn csv_header(&mut self, cols: &[&str]) {
        self.csv_header = cols.iter().map(|c| c.to_string()).collect();
    }

    pub fn csv_row(&mut self, row: Vec<String>) {
        self.csv_rows.push(row);
    }

    pub fn csv_rational_row(&mut self, mut prefix: Vec<String>, q: &Rational) {
        prefix.extend([q.numer().to_string(), q.denom().to_string(), format!("{}", rational_to_f64(q))]);
        self.csv_rows.push(prefix);
    }

    pub fn rows(&mut self, rows: Vec<Row>) {
        let with_m = rows.iter().any(|r| r.m.is_some());
        self.csv_header(if with_m {
            &["n", "k", "m", "num", "den", "approx"]
        } else {
            &["n", "k", "num", "den", "approx"]
        });
        for r in &rows {
            let mut prefix = vec![r.n.to_string(), r.k.to_string()];
            if let Some(m) = r.m {
                prefix.push(m.to_string());
            }
            self.csv_rational_row(prefix, &r.value);
            let m = r.m.map(|m| format!(" m={m}")).unwrap_or_default();
            self.text.push(format!(
                "n={} k={}{m}  {}  ~ {}",
                r.n,
                r.k,
                r.value,
                approx_text(rational_to_f64(&r.value))
            ));
        }
        self.rows = Some(rows);
    }

    pub fn verification(&mut self, reports: &[VerificationReport]) {
        self.csv_header(&["report", "label", "lhs", "rhs", "passed"]);
        let mut list = Vec::new();
        for r in reports {
            let failed = r.failures().count();
            let status = if failed == 0 { "PASS" } else { "FAIL" };
            self.text.push(format!("{status} {} ({} checks, {failed} failed)", r.name, r.checks.len()));
            let checks: Vec<Json> = r
                .checks
                .iter()
                .map(|c| {
                    self.csv_rows.push(vec![
                        r.name.clone(),
                        c.label.clone(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        c.passed.to_string(),
                    ]);
                    json!({"label": c.label, "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string(), "passed": c.passed})
                })
                .collect();
            list.push(json!({"name": r.name, "passed": failed == 0, "checks": checks}));
        }
        self.result("passed", json!(reports.iter().all(|r| r.passed())));
        self.result("reports", Json::Array(list));
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => {
                let mut s = self.text.join("\n");
                s.push('\n');
                s
            }
            OutputFormat::Json => {
                let mut doc = Map::new();
                doc.insert("schema".into(), json!(SCHEMA));
                doc.insert("command".into(), json!(self.command));
                doc.insert("inputs".into(), Json::Object(self.inputs.clone()));
                if !self.result.is_empty() {
                    doc.insert("result".into(), Json::Object(self.result.clone()));
                }
                if let Some(rows) = &self.rows {
                    doc.insert("rows".into(), Json::Array(rows.iter().map(Row::json).collect()));
                }
                let mut s = serde_json::to_string_pretty(&Json::Object(doc)).expect("json values serialize");
                s.push('\n');
                s
            }
            OutputFormat::Csv => {
                let mut s = String::new();
                for line in std::iter::once(&self.csv_header).chain(&self.csv_rows) {
                    s.push_str(&line.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn approx_text(x: f64) -> String {
    if x == 0.0 || (1e-4..1e12).contains(&x.abs()) { format!("{x}") } else { format!("{x:e}") }
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.to_string() }
}
