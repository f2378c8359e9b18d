//! The `.dqm` text format.
//!
//! ```text
//! # comments start with '#', blank lines are ignored
//! dqmatrix 2 2
//! (0 1 0 0 | 0 0 0 1)
//! (0 0 0 0 | 0 0 1 0)
//! (0 0 0 0)
//! (0 0 1 0 | 0 1 0 0)
//! ```
//!
//! After the header come `rows · cols` entries in row-major order, one per
//! line: `(w x y z)` for a standard part only, or `(w x y z | w' x' y' z')`
//! with the infinitesimal part. Coefficients are decimal floating-point
//! literals in `(1, i, j, k)` order. Rendering emits 17 significant digits so
//! that parsing a rendered matrix restores it bit for bit.

use std::fmt::Write as _;

use crate::dual_matrix::DualQuatMatrix;
use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;

const HEADER: &str = "dqmatrix";

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// A content line: 1-based line number, text with comments stripped, and the
/// byte offset of the first non-blank character.
struct Line<'a> {
    number: usize,
    text: &'a str,
    indent: usize,
}

fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let indent = body.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some(Line {
            number: i + 1,
            text: trimmed,
            indent,
        })
    })
}

fn parse_header(line: &Line<'_>) -> Result<(usize, usize)> {
    let mut parts = line.text.split_whitespace();
    if parts.next() != Some(HEADER) {
        return Err(perr(
            line.number,
            line.indent + 1,
            format!("expected header `{HEADER} <rows> <cols>`"),
        ));
    }
    let mut dim = |what: &str| -> Result<usize> {
        let tok = parts
            .next()
            .ok_or_else(|| perr(line.number, line.indent + line.text.len() + 1, format!("missing {what} in header")))?;
        let col = line.indent + tok.as_ptr() as usize - line.text.as_ptr() as usize + 1;
        let v: usize = tok
            .parse()
            .map_err(|_| perr(line.number, col, format!("{what} `{tok}` is not a nonnegative integer")))?;
        if v == 0 {
            return Err(perr(line.number, col, format!("{what} must be positive")));
        }
        Ok(v)
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    if let Some(extra) = parts.next() {
        let col = line.indent + extra.as_ptr() as usize - line.text.as_ptr() as usize + 1;
        return Err(perr(line.number, col, format!("unexpected `{extra}` after header")));
    }
    Ok((rows, cols))
}

fn parse_entry(line: &Line<'_>) -> Result<(Quaternion, Quaternion)> {
    let t = line.text;
    let col_of = |s: &str| line.indent + s.as_ptr() as usize - t.as_ptr() as usize + 1;
    let inner = t
        .strip_prefix('(')
        .ok_or_else(|| perr(line.number, line.indent + 1, "entry must start with `(`"))?;
    let inner = inner
        .strip_suffix(')')
        .ok_or_else(|| perr(line.number, line.indent + t.len(), "entry must end with `)`"))?;
    let mut halves = inner.split('|');
    let std_part = halves.next().unwrap_or("");
    let inf_part = halves.next();
    if let Some(extra) = halves.next() {
        return Err(perr(line.number, col_of(extra).saturating_sub(1), "more than one `|` in entry"));
    }
    let quat = |s: &str| -> Result<Quaternion> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(perr(
                line.number,
                col_of(s),
                format!("expected 4 coefficients, found {}", toks.len()),
            ));
        }
        let mut c = [0.0; 4];
        for (slot, tok) in c.iter_mut().zip(&toks) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| perr(line.number, col_of(tok), format!("`{tok}` is not a finite number")))?;
        }
        Ok(Quaternion::from_array(c))
    };
    let s = quat(std_part)?;
    let i = match inf_part {
        Some(p) => quat(p)?,
        None => Quaternion::default(),
    };
    Ok((s, i))
}

fn parse_stream(text: &str) -> Result<Vec<DualQuatMatrix>> {
    let mut lines = content_lines(text).peekable();
    let mut out = Vec::new();
    while let Some(header) = lines.next() {
        let (rows, cols) = parse_header(&header)?;
        let expected = rows * cols;
        let mut std = Vec::with_capacity(expected);
        let mut inf = Vec::with_capacity(expected);
        while std.len() < expected {
            match lines.peek() {
                Some(l) if !l.text.starts_with(HEADER) => {
                    let (s, i) = parse_entry(l)?;
                    std.push(s);
                    inf.push(i);
                    lines.next();
                }
                next => {
                    let (line, column) = next.map_or((header.number, 1), |l| (l.number, l.indent + 1));
                    return Err(perr(
                        line,
                        column,
                        format!(
                            "{rows}x{cols} matrix declared on line {} needs {expected} entries, found {}",
                            header.number,
                            std.len()
                        ),
                    ));
                }
            }
        }
        let std = QuatMatrix::new(rows, cols, std)?;
        let inf = QuatMatrix::new(rows, cols, inf)?;
        out.push(DualQuatMatrix::new(std, inf)?);
    }
    Ok(out)
}

/// Parses exactly one matrix.
pub fn parse_dqm(text: &str) -> Result<DualQuatMatrix> {
    let mut lines = content_lines(text);
    let Some(first) = lines.next() else {
        return Err(perr(1, 1, "empty input, expected a `dqmatrix` header"));
    };
    let (rows, cols) = parse_header(&first)?;
    if let Some(extra) = lines.nth(rows * cols) {
        return Err(perr(
            extra.number,
            extra.indent + 1,
            format!(
                "{rows}x{cols} matrix declared on line {} has more than {} entries",
                first.number,
                rows * cols
            ),
        ));
    }
    let mut all = parse_stream(text)?;
    Ok(all.remove(0))
}

/// Parses a sequence of matrices written back to back.
pub fn parse_dqm_all(text: &str) -> Result<Vec<DualQuatMatrix>> {
    parse_stream(text)
}

fn push_coeffs(out: &mut String, q: Quaternion) {
    for (i, v) in q.to_array().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:.16e}");
    }
}

/// Renders one matrix, both parts always present, preceded by `# ` comment
/// lines.
pub fn render_dqm(m: &DualQuatMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "{HEADER} {} {}", m.rows(), m.cols());
    for (s, i) in m.std().entries().iter().zip(m.inf().entries()) {
        out.push('(');
        push_coeffs(&mut out, *s);
        out.push_str(" | ");
        push_coeffs(&mut out, *i);
        out.push_str(")\n");
    }
    out
}
