//! Report output: pretty-printed JSON, or an indented text outline.

use std::fmt::Write;

use serde_json::Value;

use crate::Report;

pub fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let items: Vec<String> = a.iter().filter_map(scalar).collect();
            Some(format!("[{}]", items.join(", ")))
        }
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn outline(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        outline(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        outline(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: logdeg {}", report.command.join(" "));
    for (path, digest) in &report.inputs {
        let _ = writeln!(out, "input: {path} {digest}");
    }
    if let Some(seed) = report.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    let status = serde_json::to_value(report.status).ok().and_then(|v| v.as_str().map(String::from));
    let _ = writeln!(out, "status: {}", status.unwrap_or_default());
    if let Some(e) = &report.error {
        let _ = writeln!(out, "error: {e}");
    }
    if !report.result.is_null() {
        let _ = writeln!(out, "result:");
        match scalar(&report.result) {
            Some(s) => {
                let _ = writeln!(out, "  {s}");
            }
            None => outline(&mut out, &report.result, 1),
        }
    }
    if let Some(ms) = report.timing_ms {
        let _ = writeln!(out, "timing: {ms} ms");
    }
    out
}
