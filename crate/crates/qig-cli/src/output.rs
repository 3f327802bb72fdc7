//! Output assembly: every command produces the same document shape
//! (version, command, config echo, rows, summary), rendered as pretty
//! JSON or comment-headed CSV. Identical documents render to identical
//! bytes, which is what the determinism contract is tested against.

use serde_json::{Map, Value};

/// What a command run produces before rendering.
pub struct Outcome {
    pub rows: Vec<Map<String, Value>>,
    pub summary: Map<String, Value>,
    /// Number of property verdicts that failed. Zero exits 0; anything
    /// else exits 2 after the output is written, so the evidence always
    /// lands on disk.
    pub verdict_failures: usize,
}

pub struct Document {
    pub command: &'static str,
    pub config: Value,
    pub outcome: Outcome,
}

pub fn render_json(doc: &Document) -> String {
    let mut top = Map::new();
    top.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    top.insert("command".into(), Value::String(doc.command.into()));
    top.insert("config".into(), doc.config.clone());
    top.insert(
        "rows".into(),
        Value::Array(doc.outcome.rows.iter().cloned().map(Value::Object).collect()),
    );
    top.insert("summary".into(), Value::Object(doc.outcome.summary.clone()));
    let mut text = serde_json::to_string_pretty(&Value::Object(top))
        .expect("document serialization cannot fail");
    text.push('\n');
    text
}

/// CSV with a `#` comment preamble (version and command), a header row,
/// one line per row, and the summary as trailing comments. Gnuplot and
/// pandas both skip the comments.
pub fn render_csv(doc: &Document) -> String {
    let mut columns: Vec<&String> = Vec::new();
    for row in &doc.outcome.rows {
        for key in row.keys() {
            if !columns.contains(&key) {
                columns.push(key);
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("# version = {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("# command = {}\n", doc.command));
    out.push_str(&columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","));
    out.push('\n');
    for row in &doc.outcome.rows {
        let line: Vec<String> =
            columns.iter().map(|c| cell(row.get(*c).unwrap_or(&Value::Null))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    for (key, value) in &doc.outcome.summary {
        out.push_str(&format!("# {key} = {}\n", cell(value)));
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                fmt_g17(n.as_f64().expect("JSON number fits f64"))
            }
        }
        Value::String(s) => csv_escape(s),
        other => csv_escape(&other.to_string()),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// printf-style `%.17g`: 17 significant digits, fixed notation for
/// exponents in [-4, 17), scientific otherwise, trailing zeros trimmed.
/// 17 significant digits round-trip every f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_fixed(format!("{x:.decimals$}"))
    } else {
        trim_scientific(format!("{x:.16e}"))
    }
}

fn trim_fixed(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn trim_scientific(s: String) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{}e{exp}", trim_fixed(mantissa.to_string())),
        None => s,
    }
}
