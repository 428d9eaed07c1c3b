//! Report writers. Floats are written with round-trip precision; in JSON,
//! non-finite values become `null`.

use std::io::Write;

use canonical_growth::bounds::{IDENTITY_TOL, TYPE_SLACK, VIOLATION_TOL};
use canonical_growth::{BoundReport, BoundRow, TypeBoundReport};
use serde::Serialize;

use crate::error::Result;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Serialize)]
struct Tolerances {
    violation: f64,
    identity_gap: f64,
}

#[derive(Serialize)]
struct BoundReportJson<'a> {
    passes: bool,
    tolerances: Tolerances,
    #[serde(flatten)]
    report: &'a BoundReport,
}

#[derive(Serialize)]
struct TypeReportJson<'a> {
    passes: bool,
    slack_tolerance: f64,
    #[serde(flatten)]
    report: &'a TypeBoundReport,
}

fn bound_json(report: &BoundReport) -> BoundReportJson<'_> {
    BoundReportJson {
        passes: report.passes(),
        tolerances: Tolerances {
            violation: VIOLATION_TOL,
            identity_gap: IDENTITY_TOL,
        },
        report,
    }
}

pub fn write_bound_json<W: Write>(report: &BoundReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &bound_json(report))?;
    writeln!(out)?;
    Ok(())
}

/// Reports for several measures, e.g. a seeded random sweep.
pub fn write_bound_json_many<W: Write>(
    reports: &[BoundReport],
    seed: Option<u64>,
    mut out: W,
) -> Result<()> {
    #[derive(Serialize)]
    struct Many<'a> {
        passes: bool,
        seed: Option<u64>,
        reports: Vec<BoundReportJson<'a>>,
    }
    let many = Many {
        passes: reports.iter().all(BoundReport::passes),
        seed,
        reports: reports.iter().map(bound_json).collect(),
    };
    serde_json::to_writer_pretty(&mut out, &many)?;
    writeln!(out)?;
    Ok(())
}

const BOUND_COLUMNS: [&str; 10] = [
    "r",
    "lhs",
    "rhs_p1_a",
    "rhs_p1_b",
    "rhs_p2_a",
    "rhs_p2_b",
    "violation",
    "identity_gap",
    "passes",
    "failure",
];

fn bound_record(row: &BoundRow) -> Vec<String> {
    let mut rec: Vec<String> = [row.r, row.lhs]
        .into_iter()
        .chain(row.rhs())
        .chain([row.violation, row.identity_gap])
        .map(fmt_f64)
        .collect();
    rec.push(row.passes().to_string());
    rec.push(row.failure.as_ref().map(ToString::to_string).unwrap_or_default());
    rec
}

/// Rows only; with several reports a leading `measure` column indexes them.
pub fn write_bound_csv<W: Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let indexed = reports.len() > 1;
    if indexed {
        w.write_record(std::iter::once("measure").chain(BOUND_COLUMNS))?;
    } else {
        w.write_record(BOUND_COLUMNS)?;
    }
    for (i, report) in reports.iter().enumerate() {
        for row in &report.rows {
            let rec = bound_record(row);
            if indexed {
                w.write_record(std::iter::once(i.to_string()).chain(rec))?;
            } else {
                w.write_record(rec)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_type_json<W: Write>(report: &TypeBoundReport, mut out: W) -> Result<()> {
    let wrapped = TypeReportJson {
        passes: report.passes(),
        slack_tolerance: TYPE_SLACK,
        report,
    };
    serde_json::to_writer_pretty(&mut out, &wrapped)?;
    writeln!(out)?;
    Ok(())
}

/// Numeric table with a header row.
pub fn write_table<W: Write>(header: &[&str], rows: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}
