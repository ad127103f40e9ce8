//! Block text format, one record per block:
//!
//! ```text
//! # <id>
//! S: <source tokens>
//! H: <hypothesis tokens>
//! R: <reference>            (optional)
//! <one line of space-separated weights per hypothesis token>
//!
//! ```
//!
//! Blocks are separated by a blank line; the final one may end at EOF.

use std::collections::HashSet;

use super::{decode_utf8, format_float, parse_weight, DEFAULT_SYSTEM_NAME};
use crate::alignment::{AlignmentRecord, AttentionMatrix, Dataset};
use crate::error::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Split<'a, char>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.split('\n').enumerate().peekable(),
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .next()
            .map(|(n, l)| (n + 1, l.strip_suffix('\r').unwrap_or(l)))
    }

    fn peek_blank(&mut self) -> Option<bool> {
        self.inner.peek().map(|(_, l)| l.trim().is_empty())
    }
}

pub fn parse_block_text(input: &[u8]) -> Result<Dataset> {
    let text = decode_utf8(input)?;
    let mut lines = Lines::new(text);
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    loop {
        while lines.peek_blank() == Some(true) {
            lines.next();
        }
        let Some((lineno, header)) = lines.next() else {
            break;
        };
        let record = parse_block(&mut lines, lineno, header, records.len())?;
        if !ids.insert(record.id().to_owned()) {
            return Err(block_error(record.id(), "duplicate record id"));
        }
        records.push(record);
    }
    Dataset::new(DEFAULT_SYSTEM_NAME, records)
}

fn block_error(block: &str, reason: impl Into<String>) -> Error {
    Error::MalformedBlock {
        block: block.to_owned(),
        reason: reason.into(),
    }
}

fn parse_block(
    lines: &mut Lines<'_>,
    lineno: usize,
    header: &str,
    index: usize,
) -> Result<AlignmentRecord> {
    let Some(id) = header.strip_prefix('#') else {
        return Err(block_error(
            &format!("#{index}"),
            format!("line {lineno}: expected `# <id>` header, found {header:?}"),
        ));
    };
    let id = match id.trim() {
        "" => index.to_string(),
        id => id.to_owned(),
    };
    let mut tagged = |tag: &str| -> Result<&str> {
        match lines.next() {
            Some((_, line)) => line
                .strip_prefix(tag)
                .ok_or_else(|| block_error(&id, format!("expected `{tag}` line, found {line:?}"))),
            None => Err(block_error(&id, format!("missing `{tag}` line"))),
        }
    };
    let src: Vec<String> = tagged("S:")?
        .split_whitespace()
        .map(str::to_owned)
        .collect();
    let hyp: Vec<String> = tagged("H:")?
        .split_whitespace()
        .map(str::to_owned)
        .collect();

    let mut reference = None;
    let mut pending = lines.next();
    if let Some((_, line)) = pending {
        if let Some(r) = line.strip_prefix("R:") {
            reference = Some(r.strip_prefix(' ').unwrap_or(r).to_owned());
            pending = lines.next();
        }
    }

    let mut rows = Vec::with_capacity(hyp.len());
    for row in 0..hyp.len() {
        let Some((_, line)) = pending.take().or_else(|| lines.next()) else {
            return Err(block_error(
                &id,
                format!("expected {} matrix rows, found {row}", hyp.len()),
            ));
        };
        let weights = line
            .split_whitespace()
            .map(parse_weight)
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| block_error(&id, format!("matrix row {row}: {e}")))?;
        if weights.len() != src.len() {
            return Err(Error::BlockRowWidth {
                block: id,
                row,
                expected: src.len(),
                found: weights.len(),
            });
        }
        rows.push(weights);
    }
    if let Some((_, line)) = pending.or_else(|| lines.next()) {
        if !line.trim().is_empty() {
            return Err(block_error(
                &id,
                format!("expected a blank line after the matrix, found {line:?}"),
            ));
        }
    }

    let matrix = AttentionMatrix::from_rows(rows).map_err(|e| block_error(&id, e.to_string()))?;
    AlignmentRecord::new(id.clone(), src, hyp, matrix, reference).map_err(|e| match e {
        dim @ Error::Dimension { .. } => dim,
        other => block_error(&id, other.to_string()),
    })
}

pub fn serialize_block_text(dataset: &Dataset) -> Vec<u8> {
    let mut out = String::new();
    for record in dataset {
        out.push_str("# ");
        out.push_str(record.id());
        out.push_str("\nS: ");
        out.push_str(&record.src_tokens().join(" "));
        out.push_str("\nH: ");
        out.push_str(&record.hyp_tokens().join(" "));
        out.push('\n');
        if let Some(r) = record.ref_text() {
            out.push_str("R: ");
            out.push_str(r);
            out.push('\n');
        }
        for row in record.attention().iter_rows() {
            let cells: Vec<String> = row.iter().map(|w| format_float(*w)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    out.into_bytes()
}
