//! CSV and JSON writers. Floats use Rust's shortest round-trip formatting,
//! so parsing a written value gives back the identical `f64`.

use std::io::{self, Write};

use serde::Serialize;

use crate::report::CheckReport;
use crate::sweeps::{RatioCell, RatioMap, RegionCurve};

pub const RATIO_HEADER: &str = "d1,d2,p_sep,p_outer,p_a,p_b,p_c,ratio_db,region,nu_opt,eta_bar";
pub const REGION_HEADER: &str = "scheme,d1,d2";

fn num(x: f64) -> String {
    format!("{x}")
}

fn ratio_row(c: &RatioCell) -> String {
    [
        num(c.d1),
        num(c.d2),
        num(c.p_sep),
        num(c.p_outer),
        num(c.p_a),
        num(c.p_b),
        num(c.p_c),
        num(c.ratio_db),
        c.region.label().to_string(),
        c.nu_opt.map(num).unwrap_or_default(),
        num(c.eta_bar),
    ]
    .join(",")
}

pub fn write_ratio_csv<W: Write>(map: &RatioMap, mut w: W) -> io::Result<()> {
    writeln!(w, "{RATIO_HEADER}")?;
    for e in &map.entries {
        match &e.cell {
            Ok(c) => writeln!(w, "{}", ratio_row(c))?,
            Err(_) => writeln!(w, "{},{},,,,,,,,,", num(e.d1), num(e.d2))?,
        }
    }
    w.flush()
}

/// Curves in the given order, each already sorted by `d1`.
pub fn write_region_csv<W: Write>(curves: &[RegionCurve], mut w: W) -> io::Result<()> {
    writeln!(w, "{REGION_HEADER}")?;
    for c in curves {
        for &(d1, d2) in &c.points {
            writeln!(w, "{},{},{}", c.scheme.name(), num(d1), num(d2))?;
        }
    }
    w.flush()
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    d1: f64,
    d2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cell: Option<&'a RatioCell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct JsonMap<'a> {
    comparison: &'static str,
    cells: Vec<JsonEntry<'a>>,
    boundary: &'a [(f64, f64)],
}

pub fn write_ratio_json<W: Write>(map: &RatioMap, mut w: W) -> io::Result<()> {
    let doc = JsonMap {
        comparison: map.comparison.name(),
        cells: map
            .entries
            .iter()
            .map(|e| JsonEntry {
                d1: e.d1,
                d2: e.d2,
                cell: e.cell.as_ref().ok(),
                error: e.cell.as_ref().err().map(|err| err.to_string()),
            })
            .collect(),
        boundary: &map.boundary,
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

pub fn write_reports<W: Write>(reports: &[CheckReport], mut w: W) -> io::Result<()> {
    for r in reports {
        writeln!(w, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(w, "{} checks, {} failed", reports.len(), failed)?;
    w.flush()
}

/// Left-aligned columns separated by two spaces.
pub fn write_table<W: Write>(header: &[&str], rows: &[Vec<String>], mut w: W) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &wd)| format!("{c:<wd$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(w, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    w.flush()
}
