//! CSV export and import of solver traces.
//!
//! Header `k,x_0,...,x_{s-1},D,V`, one line per stored row, reals written in
//! positional decimal with 17 significant digits so that every `f64` survives
//! a round trip bit for bit.

use std::io::{BufRead, Write};

use crate::error::{HeronError, Result};
use crate::solver::TraceRow;
use crate::vector::Vector;

/// Formats `v` in positional decimal notation with `digits` significant digits.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting always carries an exponent");
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn csv_header(dim: usize) -> String {
    let mut cols = vec!["k".to_string()];
    cols.extend((0..dim).map(|i| format!("x_{i}")));
    cols.push("D".into());
    cols.push("V".into());
    cols.join(",")
}

pub fn write_csv<W: Write>(mut out: W, dim: usize, rows: &[TraceRow]) -> std::io::Result<()> {
    writeln!(out, "{}", csv_header(dim))?;
    for row in rows {
        write!(out, "{}", row.k)?;
        for c in row.x.iter() {
            write!(out, ",{}", format_significant(*c, 17))?;
        }
        writeln!(
            out,
            ",{},{}",
            format_significant(row.d_value, 17),
            format_significant(row.v_best, 17)
        )?;
    }
    Ok(())
}

/// Parses a trace written by [`write_csv`], validating the header and row shape.
pub fn read_csv<R: BufRead>(input: R) -> Result<(usize, Vec<TraceRow>)> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| HeronError::Trace("empty file".into()))?
        .map_err(|e| HeronError::Trace(e.to_string()))?;
    let ncols = header.split(',').count();
    if ncols < 4 {
        return Err(HeronError::Trace(format!("header has {ncols} columns")));
    }
    let dim = ncols - 3;
    if header.trim_end() != csv_header(dim) {
        return Err(HeronError::Trace(format!("unexpected header {header:?}")));
    }

    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| HeronError::Trace(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != ncols {
            return Err(HeronError::Trace(format!(
                "line {}: expected {ncols} fields, found {}",
                lineno + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| HeronError::Trace(format!("line {}: bad {what}", lineno + 2));
        let k: u64 = fields[0].parse().map_err(|_| bad("k"))?;
        let reals = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| bad("number"))?;
        let x = Vector::new(reals[..dim].to_vec()).map_err(|_| bad("coordinate"))?;
        rows.push(TraceRow {
            k,
            x,
            d_value: reals[dim],
            v_best: reals[dim + 1],
        });
    }
    Ok((dim, rows))
}
