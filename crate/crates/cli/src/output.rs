//! Rendering of results as JSON or as plain tables. Both are produced from
//! the same rounded JSON value, so they always show the same numbers.

use serde_json::{Map, Value};

/// Significant digits kept for every reported number.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Rounds every floating-point number in `v` in place.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_table(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_object)
}

fn flatten(prefix: &str, v: &Value, lines: &mut Vec<(String, String)>, tables: &mut Vec<(String, Vec<Value>)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                flatten(&key, child, lines, tables);
            }
        }
        Value::Array(items) if is_table(items) => tables.push((prefix.to_string(), items.clone())),
        Value::Array(items) => {
            lines.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(" ")));
        }
        other => lines.push((prefix.to_string(), scalar(other))),
    }
}

fn render_rows(name: &str, rows: &[Value], out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        for k in row.as_object().map(Map::keys).into_iter().flatten() {
            let nested = row[k].is_object() || row[k].as_array().is_some_and(|a| is_table(a));
            if !nested && !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| columns.iter().map(|c| r.get(c).map(scalar).unwrap_or_default()).collect()).collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    out.push_str(&format!("\n[{}]\n", name));
    let line = |vals: Vec<&str>| {
        let mut s = vals.iter().zip(&widths).map(|(v, w)| format!("{:<w$}", v, w = w)).collect::<Vec<_>>().join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    out.push_str(&line(columns.iter().map(String::as_str).collect()));
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    for row in rows {
        for (k, child) in row.as_object().into_iter().flatten() {
            if child.is_object() {
                out.push_str(&render_table(&Value::Object(Map::from_iter([(k.clone(), child.clone())]))));
            }
        }
    }
}

/// `key = value` lines for scalars, aligned tables for arrays of objects.
pub fn render_table(v: &Value) -> String {
    let (mut lines, mut tables) = (Vec::new(), Vec::new());
    flatten("", v, &mut lines, &mut tables);
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in &lines {
        out.push_str(&format!("{:<w$}  {}\n", k, val, w = width));
    }
    for (name, rows) in &tables {
        render_rows(name, rows, &mut out);
    }
    out
}
