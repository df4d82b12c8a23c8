//! OEIS b-file and CSV serialization.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::growth::ResidualSeries;
use crate::orbits::OrbitReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BFileRecord {
    pub index: usize,
    pub value: u64,
}

/// Writes `index value` lines for `terms`, the first at index `offset`.
pub fn write_bfile<W: Write>(out: &mut W, terms: &[u64], offset: usize) -> Result<()> {
    for (i, v) in terms.iter().enumerate() {
        writeln!(out, "{} {v}", i + offset)?;
    }
    Ok(())
}

/// Reads a b-file. Blank lines and `#` comments are skipped; indices must be
/// consecutive.
pub fn read_bfile<R: BufRead>(input: R) -> Result<Vec<BFileRecord>> {
    let mut records: Vec<BFileRecord> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fail = |message: String| Error::Format { line: line_no, message };
        let mut fields = trimmed.split_whitespace();
        let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(fail(format!("expected `index value`, got {trimmed:?}")));
        };
        let index: usize = i.parse().map_err(|_| fail(format!("bad index {i:?}")))?;
        let value: u64 = v.parse().map_err(|_| fail(format!("bad value {v:?}")))?;
        if let Some(prev) = records.last() {
            if index != prev.index + 1 {
                return Err(fail(format!("index {index} does not follow {}", prev.index)));
            }
        }
        records.push(BFileRecord { index, value });
    }
    Ok(records)
}

pub fn write_terms_csv<W: Write>(out: &mut W, terms: &[u64]) -> Result<()> {
    writeln!(out, "n,value")?;
    for (i, v) in terms.iter().enumerate() {
        writeln!(out, "{},{v}", i + 1)?;
    }
    Ok(())
}

pub fn write_residuals_csv<W: Write>(out: &mut W, series: &ResidualSeries) -> Result<()> {
    writeln!(out, "n,value,curve,residual")?;
    for p in &series.points {
        writeln!(out, "{},{},{},{}", p.n, p.value, p.curve, p.residual)?;
    }
    Ok(())
}

pub fn write_orbit_csv<W: Write>(out: &mut W, report: &OrbitReport) -> Result<()> {
    writeln!(out, "offset,value")?;
    for (offset, value) in report.plot_points() {
        writeln!(out, "{offset},{value}")?;
    }
    Ok(())
}
