//! Measure files.
//!
//! CSV has a header `re,im[,mass]`; a missing or empty mass means 1 and lines
//! starting with `#` are skipped. JSON is an array of `{"re", "im", "mass"}`
//! objects, `mass` again optional.

use std::fs;
use std::io::Write;
use std::path::Path;

use canonical_growth::{Atom, ComplexPoint, DiscreteMeasure, Error as NumericError};
use serde::Deserialize;

use crate::error::{Result, ToolError};
use crate::report::fmt_f64;

#[derive(Debug, Deserialize)]
struct JsonAtom {
    re: f64,
    im: f64,
    #[serde(default = "unit_mass")]
    mass: f64,
}

fn unit_mass() -> f64 {
    1.0
}

/// Reads a measure, choosing the format by extension (`.json`, else CSV).
pub fn read_measure(path: &Path) -> Result<DiscreteMeasure> {
    let text = fs::read_to_string(path).map_err(|source| ToolError::Io {
        path: path.to_owned(),
        source,
    })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json_measure(&text, path)
    } else {
        parse_csv_measure(&text, path)
    }
}

pub fn parse_csv_measure(text: &str, path: &Path) -> Result<DiscreteMeasure> {
    let parse_err = |line: u64, message: String| ToolError::Parse {
        path: path.to_owned(),
        line: Some(line),
        message,
    };
    // csv's own line count misses skipped lines; derive it from the byte offset
    let line_at = |pos: Option<&csv::Position>| {
        pos.map_or(0, |p| {
            let bytes = text.as_bytes();
            let mut end = (p.byte() as usize).min(bytes.len());
            // the reported offset can sit on skipped blank or comment lines
            while end < bytes.len() && matches!(bytes[end], b'\n' | b'\r' | b'#') {
                if bytes[end] == b'#' {
                    while end < bytes.len() && bytes[end] != b'\n' {
                        end += 1;
                    }
                }
                end += 1;
            }
            let end = end.min(bytes.len());
            bytes[..end].iter().filter(|&&b| b == b'\n').count() as u64 + 1
        })
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let header_line = line_at(headers.position());
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(re_col), Some(im_col)) = (column("re"), column("im")) else {
        return Err(parse_err(header_line, "header must name columns re,im[,mass]".into()));
    };
    let mass_col = column("mass");

    let mut atoms = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = line_at(e.position());
            parse_err(line, e.to_string())
        })?;
        let line = line_at(record.position());
        let field = |col: usize, name: &str| -> Result<f64> {
            let raw = record
                .get(col)
                .ok_or_else(|| parse_err(line, format!("missing {name}")))?;
            raw.parse::<f64>()
                .map_err(|_| parse_err(line, format!("{name}: cannot parse {raw:?} as a number")))
        };
        let re = field(re_col, "re")?;
        let im = field(im_col, "im")?;
        let mass = match mass_col.and_then(|c| record.get(c)) {
            Some(s) if !s.is_empty() => field(mass_col.unwrap(), "mass")?,
            _ => 1.0,
        };
        atoms.push(Atom::new(ComplexPoint::new(re, im), mass));
        lines.push(line);
    }
    DiscreteMeasure::new(atoms).map_err(|e| match e {
        NumericError::InvalidMeasure { index, reason } => parse_err(lines[index], reason.into()),
        other => other.into(),
    })
}

pub fn parse_json_measure(text: &str, path: &Path) -> Result<DiscreteMeasure> {
    let parsed: Vec<JsonAtom> = serde_json::from_str(text).map_err(|e| ToolError::Parse {
        path: path.to_owned(),
        line: Some(e.line() as u64),
        message: e.to_string(),
    })?;
    DiscreteMeasure::new(
        parsed
            .into_iter()
            .map(|a| Atom::new(ComplexPoint::new(a.re, a.im), a.mass))
            .collect(),
    )
    .map_err(|e| match e {
        NumericError::InvalidMeasure { index, reason } => ToolError::Parse {
            path: path.to_owned(),
            line: None,
            message: format!("atom {index}: {reason}"),
        },
        other => other.into(),
    })
}

/// Writes `re,im,mass` with round-trip precision.
pub fn write_measure_csv<W: Write>(m: &DiscreteMeasure, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "mass"])?;
    for a in m.atoms() {
        w.write_record([fmt_f64(a.point.re), fmt_f64(a.point.im), fmt_f64(a.mass)])?;
    }
    w.flush()?;
    Ok(())
}
