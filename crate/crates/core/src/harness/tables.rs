//! Table dumps: Game 2 verdict grids and Game 1 block lists.
//!
//! CSV columns are `x,y,verdict,family` and `k,n,lo,hi`; JSON output is an
//! array of objects with the same field names.

use std::io::Write;

use serde::Serialize;

use super::Format;
use crate::bound::BoundFn;
use crate::closed_form::{classify_g2, enumerate_p_g1, PFamily};
use crate::error::Result;
use crate::kernel::{Verdict, WeightedPosition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct G2Row {
    pub x: u64,
    pub y: u64,
    pub verdict: Verdict,
    pub family: Option<PFamily>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct G1Row {
    pub k: u64,
    pub n: u64,
    pub lo: u64,
    pub hi: u64,
}

/// Every Game 2 position with `2x + y <= max_weight`, ordered by (weight, x).
pub fn g2_rows(max_weight: u64) -> Vec<G2Row> {
    let mut rows = Vec::new();
    for w in 0..=max_weight {
        for x in 0..=w / 2 {
            let Ok(pos) = WeightedPosition::new(x, w - 2 * x) else {
                continue;
            };
            let class = classify_g2(pos);
            rows.push(G2Row {
                x,
                y: pos.light(),
                verdict: class.verdict,
                family: class.family,
            });
        }
    }
    rows
}

/// The P blocks up to `max_x` for each turn in `turns`.
pub fn g1_rows(
    f: &BoundFn,
    turns: std::ops::RangeInclusive<u64>,
    max_x: u64,
) -> Result<Vec<G1Row>> {
    let mut rows = Vec::new();
    for k in turns {
        rows.extend(enumerate_p_g1(f, k, max_x)?.into_iter().map(|b| G1Row {
            k,
            n: b.index,
            lo: b.lo,
            hi: b.hi,
        }));
    }
    Ok(rows)
}

pub fn write_rows<T: Serialize, W: Write>(
    rows: &[T],
    format: Format,
    out: W,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(std::io::Error::other)?;
            }
            w.flush()
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)
        }
        Format::Text => write_text(rows, out),
    }
}

/// Whitespace-aligned columns with a header line, from the same serde field names.
fn write_text<T: Serialize, W: Write>(rows: &[T], mut out: W) -> std::io::Result<()> {
    let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|r| match serde_json::to_value(r) {
            Ok(serde_json::Value::Object(m)) => Ok(m),
            _ => Err(std::io::Error::other("table rows must be structs")),
        })
        .collect::<std::io::Result<_>>()?;
    let Some(first) = records.first() else {
        return Ok(());
    };
    let headers: Vec<&String> = first.keys().collect();
    let cell = |v: &serde_json::Value| match v {
        serde_json::Value::Null => "-".to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let cells: Vec<Vec<String>> = records
        .iter()
        .map(|m| headers.iter().map(|h| cell(&m[*h])).collect())
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .max()
                .unwrap_or(0)
                .max(h.len())
        })
        .collect();
    let line = |out: &mut W, items: Vec<&str>| -> std::io::Result<()> {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  "))
    };
    line(&mut out, headers.iter().map(|h| h.as_str()).collect())?;
    for row in &cells {
        line(&mut out, row.iter().map(String::as_str).collect())?;
    }
    Ok(())
}
