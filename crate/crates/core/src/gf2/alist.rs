//! MacKay alist text format.
//!
//! ```text
//! cols rows
//! max_col_degree max_row_degree
//! col degrees
//! row degrees
//! one line per column: 1-based row indices, zero-padded to max_col_degree
//! one line per row: 1-based column indices, zero-padded to max_row_degree
//! ```

use std::fmt::Write as _;

use super::SparseBinMatrix;
use crate::error::{Error, Result};

pub fn write_alist(m: &SparseBinMatrix) -> String {
    let cols = m.col_supports();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = m.row_supports().iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.cols(), m.rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    push_line(&mut out, cols.iter().map(Vec::len));
    push_line(&mut out, m.row_supports().iter().map(Vec::len));
    for c in &cols {
        push_padded(&mut out, c, max_col);
    }
    for r in m.row_supports() {
        push_padded(&mut out, r, max_row);
    }
    out
}

fn push_line(out: &mut String, values: impl Iterator<Item = usize>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

fn push_padded(out: &mut String, idx: &[usize], width: usize) {
    push_line(
        out,
        idx.iter()
            .map(|i| i + 1)
            .chain(std::iter::repeat_n(0, width - idx.len())),
    );
}

/// Parses an alist. Each index list sits on its own line; zero padding is
/// optional.
pub fn read_alist(text: &str) -> Result<SparseBinMatrix> {
    let mut lines = text.lines();
    let mut header =
        |what: &str| -> Result<Vec<usize>> { parse_line(lines.next().unwrap_or(""), what) };
    let dims = header("dimensions")?;
    let [n_cols, n_rows] = dims[..] else {
        return Err(Error::Parse("alist: first line must be 'cols rows'".into()));
    };
    let maxes = header("max degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(Error::Parse(
            "alist: second line must hold two max degrees".into(),
        ));
    };
    let col_deg = header("column degrees")?;
    let row_deg = header("row degrees")?;
    if col_deg.len() != n_cols || row_deg.len() != n_rows {
        return Err(Error::Parse("alist: degree list length mismatch".into()));
    }
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::Parse(
            "alist: degree exceeds declared maximum".into(),
        ));
    }

    let mut read_lists = |degs: &[usize], bound: usize, what: &str| -> Result<Vec<Vec<usize>>> {
        degs.iter()
            .enumerate()
            .map(|(i, &d)| {
                let l: Vec<usize> = parse_line(lines.next().unwrap_or(""), what)?
                    .into_iter()
                    .filter(|&v| v != 0)
                    .collect();
                if l.len() != d {
                    return Err(Error::Parse(format!(
                        "alist: {what} {} lists {} indices, degree says {d}",
                        i + 1,
                        l.len()
                    )));
                }
                if let Some(&v) = l.iter().find(|&&v| v > bound) {
                    return Err(Error::Parse(format!(
                        "alist: index {v} out of range in {what} {}",
                        i + 1
                    )));
                }
                Ok(l.into_iter().map(|v| v - 1).collect())
            })
            .collect()
    };
    let mut col_lists = read_lists(&col_deg, n_rows, "column")?;
    let row_lists = read_lists(&row_deg, n_cols, "row")?;

    let m = SparseBinMatrix::from_row_support(n_cols, row_lists)
        .map_err(|e| Error::Parse(format!("alist: {e}")))?;
    for c in &mut col_lists {
        c.sort_unstable();
    }
    if col_lists != m.col_supports() {
        return Err(Error::Parse(
            "alist: column lists disagree with row lists".into(),
        ));
    }
    Ok(m)
}

fn parse_line(line: &str, what: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("alist: '{t}' in {what} is not an integer")))
        })
        .collect()
}
