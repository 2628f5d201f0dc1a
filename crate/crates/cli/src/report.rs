//! Analysis reports and their text, LaTeX and JSON renderings.

use balvar_core::balance::DivergenceSplit;
use balvar_core::render::{
    divergence_latex, divergence_text, form_latex, form_text, poly_latex, poly_text, rational_text,
};
use balvar_core::{ChartSpec, Form, Poly, Rational};
use serde_json::{json, Map, Value as Json};

use crate::syntax::SystemDocument;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(u64),
    Poly(Poly),
    Form(Form),
    Rational(Rational),
    Divergence(DivergenceSplit),
    List(Vec<Value>),
    Text(String),
    Absent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: &'static str,
    pub entries: Vec<(String, Value)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Section {
    pub fn new(name: &'static str) -> Self {
        Section { name, entries: Vec::new(), diagnostics: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) {
        self.entries.push((key.into(), value));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub document: SystemDocument,
    pub order: u32,
    pub sections: Vec<Section>,
    pub footnotes: Vec<String>,
}

impl Report {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn add_footnote(&mut self, note: &str) {
        if !self.footnotes.iter().any(|f| f == note) {
            self.footnotes.push(note.to_string());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Structured,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Latex => render_latex(report),
        Format::Structured => render_structured(report),
    }
}

fn value_text(chart: &ChartSpec, v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Int(k) => k.to_string(),
        Value::Poly(p) => poly_text(chart, p),
        Value::Form(f) => form_text(chart, f),
        Value::Rational(r) => rational_text(r),
        Value::Divergence(d) => divergence_text(chart, d),
        Value::List(items) => {
            let parts: Vec<String> = items.iter().map(|x| value_text(chart, x)).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Text(s) => s.clone(),
        Value::Absent => "none".into(),
    }
}

fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn render_text(report: &Report) -> String {
    let doc = &report.document;
    let chart = &doc.chart;
    let mut out = String::new();
    if let Some(t) = &doc.title {
        out.push_str(&format!("{t}\n"));
    }
    out.push_str(&format!(
        "base: {}\nfields: {}\ndensity: {}\norder: {}\n",
        chart.base_names().join(" "),
        chart.field_names().join(" "),
        poly_text(chart, chart.rho()),
        report.order
    ));
    for s in &report.sections {
        out.push_str(&format!("\n== {} ==\n", s.name));
        for (k, v) in &s.entries {
            out.push_str(&format!("{k}: {}\n", value_text(chart, v)));
        }
        for d in &s.diagnostics {
            out.push_str(&format!("diagnostic[{}]: {}\n", d.code, d.message));
        }
    }
    if !report.footnotes.is_empty() {
        out.push_str("\n== footnotes ==\n");
        for (k, f) in report.footnotes.iter().enumerate() {
            out.push_str(&format!("[{}] {f}\n", k + 1));
        }
    }
    out
}

fn value_latex(chart: &ChartSpec, v: &Value) -> String {
    match v {
        Value::Bool(b) => format!("\\text{{{b}}}"),
        Value::Int(k) => k.to_string(),
        Value::Poly(p) => poly_latex(chart, p),
        Value::Form(f) => form_latex(chart, f),
        Value::Rational(r) if r.is_integer() => r.numer().to_string(),
        Value::Rational(r) => format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom()),
        Value::Divergence(d) => divergence_latex(chart, d),
        Value::List(items) => {
            let parts: Vec<String> = items.iter().map(|x| value_latex(chart, x)).collect();
            format!("\\left[{}\\right]", parts.join(",\\ "))
        }
        Value::Text(s) => format!("\\text{{{}}}", latex_escape(s)),
        Value::Absent => "\\text{none}".into(),
    }
}

fn latex_escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '_' | '&' | '%' | '$' | '#' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}

fn render_latex(report: &Report) -> String {
    let doc = &report.document;
    let chart = &doc.chart;
    let mut out = String::new();
    if let Some(t) = &doc.title {
        out.push_str(&format!("% {t}\n"));
    }
    out.push_str(&format!(
        "% base: {}; fields: {}; order {}\n",
        chart.base_names().join(" "),
        chart.field_names().join(" "),
        report.order
    ));
    for s in &report.sections {
        out.push_str(&format!("\\paragraph{{{}}}\n\\begin{{align*}}\n", latex_escape(s.name)));
        let rows: Vec<String> = s
            .entries
            .iter()
            .map(|(k, v)| format!("  \\text{{{}}} &= {}", latex_escape(k), value_latex(chart, v)))
            .collect();
        out.push_str(&rows.join(" \\\\\n"));
        out.push_str("\n\\end{align*}\n");
        for d in &s.diagnostics {
            out.push_str(&format!("% diagnostic[{}]: {}\n", d.code, d.message));
        }
    }
    for (k, f) in report.footnotes.iter().enumerate() {
        out.push_str(&format!("% [{}] {f}\n", k + 1));
    }
    out
}

fn value_json(chart: &ChartSpec, v: &Value) -> Json {
    match v {
        Value::Bool(b) => json!(b),
        Value::Int(k) => json!(k),
        Value::Poly(p) => json!(poly_text(chart, p)),
        Value::Form(f) => json!(form_text(chart, f)),
        Value::Rational(r) => json!(rational(r)),
        Value::Divergence(d) => {
            let mut m = Map::new();
            for (mu, p) in d.potentials.iter().enumerate() {
                m.insert(chart.base_names()[mu].clone(), json!(poly_text(chart, p)));
            }
            json!({ "potentials": m, "remainder": poly_text(chart, &d.remainder) })
        }
        Value::List(items) => Json::Array(items.iter().map(|x| value_json(chart, x)).collect()),
        Value::Text(s) => json!(s),
        Value::Absent => Json::Null,
    }
}

/// JSON with top-level keys `system`, `analyses` and `footnotes`.
/// Polynomials are canonical text, rationals `"p/q"`.
fn render_structured(report: &Report) -> String {
    let doc = &report.document;
    let chart = &doc.chart;
    let mut relations = Map::new();
    for ((i, mu), p) in &doc.flux {
        relations.insert(
            format!("F[{},{}]", chart.field_names()[*i], chart.base_names()[*mu]),
            json!(doc.poly_source(p)),
        );
    }
    for ((i, idx), p) in &doc.higher {
        relations.insert(
            format!("F[{},{}]", chart.field_names()[*i], doc.index_token(idx)),
            json!(doc.poly_source(p)),
        );
    }
    for (i, p) in &doc.sources {
        relations.insert(format!("Pi[{}]", chart.field_names()[*i]), json!(doc.poly_source(p)));
    }
    let system = json!({
        "title": doc.title,
        "notes": doc.notes,
        "base": chart.base_names(),
        "fields": chart.field_names(),
        "density": poly_text(chart, chart.rho()),
        "order": report.order,
        "relations": relations,
    });
    let mut analyses = Map::new();
    for s in &report.sections {
        let mut m = Map::new();
        for (k, v) in &s.entries {
            m.insert(k.clone(), value_json(chart, v));
        }
        let diags: Vec<Json> = s
            .diagnostics
            .iter()
            .map(|d| json!({ "code": d.code, "message": d.message }))
            .collect();
        m.insert("diagnostics".into(), Json::Array(diags));
        analyses.insert(s.name.to_string(), Json::Object(m));
    }
    let root = json!({
        "system": system,
        "analyses": analyses,
        "footnotes": report.footnotes,
    });
    let mut s = serde_json::to_string_pretty(&root).expect("JSON values serialize");
    s.push('\n');
    s
}
