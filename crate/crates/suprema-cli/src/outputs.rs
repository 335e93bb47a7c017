//! Deterministic artifact writers: canonical JSON (sorted keys, 17
//! significant digits for floats), RFC-4180 CSV, and minimal SVG plots.
//! Everything is written to a temp file and renamed into place so partial
//! failures never corrupt earlier outputs.

use anyhow::{bail, Context, Result};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;
use suprema::montecarlo::EnvelopePoint;

/// 17 significant digits, canonical form ("1.2345678901234567e0").
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        panic!("non-finite value in output: {x}");
    }
    let x = if x == 0.0 { 0.0 } else { x }; // canonicalize -0
    format!("{x:.16e}")
}

fn write_json_value(out: &mut String, v: &Value) -> Result<()> {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}")?;
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}")?;
            } else if let Some(f) = n.as_f64() {
                out.push_str(&fmt_float(f));
            } else {
                bail!("unrepresentable number in JSON output");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s)?),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json_value(out, item)?;
            }
            out.push(']');
        }
        // serde_json's default map is sorted (BTreeMap)
        Value::Object(map) => {
            out.push('{');
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k)?);
                out.push(':');
                write_json_value(out, val)?;
            }
            out.push('}');
        }
    }
    Ok(())
}

pub fn canonical_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_json_value(&mut out, &v)?;
    out.push('\n');
    Ok(out)
}

/// RFC-4180: comma separators, CRLF records, quotes doubled inside quoted
/// fields, quoting only when needed.
pub fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn csv_table(columns: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(
        &columns
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|v| fmt_float(*v))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str("\r\n");
    }
    out
}

/// Atomic write: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .context("output path needs a parent directory")?;
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .and_then(|s| s.to_str())
            .context("bad file name")?
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Log-log envelope plot with a confidence band. No timestamps anywhere, so
/// plots are byte-stable too.
pub fn envelope_svg(title: &str, points: &[EnvelopePoint]) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let xs: Vec<f64> = points.iter().map(|p| p.t.log10()).collect();
    let ys_lo: Vec<f64> = points.iter().map(|p| p.ci_lo.max(1e-12).log10()).collect();
    let ys_hi: Vec<f64> = points.iter().map(|p| p.ci_hi.log10()).collect();
    let (x0, x1) = (
        xs.iter().cloned().fold(f64::MAX, f64::min),
        xs.iter().cloned().fold(f64::MIN, f64::max),
    );
    let (mut y0, mut y1) = (
        ys_lo.iter().cloned().fold(f64::MAX, f64::min),
        ys_hi.iter().cloned().fold(f64::MIN, f64::max),
    );
    if y1 - y0 < 0.2 {
        y0 -= 0.1;
        y1 += 0.1;
    }
    let px = |x: f64| ml + (x - x0) / (x1 - x0).max(1e-12) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0).max(1e-12) * (h - mt - mb);

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    let _ = write!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n");
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        ml,
        title.replace('<', "&lt;").replace('>', "&gt;")
    );
    // axes
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr,
        h - mb
    );
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb
    );
    // decade ticks
    let mut d = x0.ceil() as i64;
    while (d as f64) <= x1 {
        let x = px(d as f64);
        let _ = write!(
            svg,
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#999\"/><text x=\"{x}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">1e{d}</text>\n",
            h - mb,
            h - mb + 5.0,
            h - mb + 20.0
        );
        d += 1;
    }
    let mut d = y0.ceil() as i64;
    while (d as f64) <= y1 {
        let y = py(d as f64);
        let _ = write!(
            svg,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{ml}\" y2=\"{y}\" stroke=\"#999\"/><text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>\n",
            ml - 5.0,
            ml - 8.0,
            y + 4.0
        );
        d += 1;
    }
    // confidence band
    let mut band = String::new();
    for (i, &x) in xs.iter().enumerate() {
        let _ = write!(
            band,
            "{}{:.2},{:.2} ",
            if i == 0 { "M" } else { "L" },
            px(x),
            py(ys_hi[i])
        );
    }
    for (i, &x) in xs.iter().enumerate().rev() {
        let _ = write!(band, "L{:.2},{:.2} ", px(x), py(ys_lo[i]));
    }
    band.push('Z');
    let _ = write!(
        svg,
        "<path d=\"{band}\" fill=\"#aac8e8\" fill-opacity=\"0.6\" stroke=\"none\"/>\n"
    );
    // ratio polyline
    let line: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "{:.2},{:.2}",
                px(p.t.log10()),
                py(p.ratio.max(1e-12).log10())
            )
        })
        .collect();
    let _ = write!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\"/>\n",
        line.join(" ")
    );
    // unit-ratio guide
    if y0 < 0.0 && y1 > 0.0 {
        let y = py(0.0);
        let _ = write!(svg, "<line x1=\"{ml}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n", w - mr);
    }
    svg.push_str("</svg>\n");
    svg
}
