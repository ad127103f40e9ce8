//! Alignment records and their attention matrices.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Row sums further than this from 1 are reported by [`validate_record`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-3;

/// Attention weights of one translation, stored row-major.
///
/// Row `j` is the distribution of hypothesis token `j` over the source
/// tokens, so `get(j, i)` is the weight between source token `i` and
/// hypothesis token `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMatrix {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl AttentionMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::InvalidMatrix("matrix has no rows".into()));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::InvalidMatrix("matrix has no columns".into()));
        }
        let mut weights = Vec::with_capacity(n_rows * n_cols);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {j} has {} weights, row 0 has {n_cols}",
                    row.len()
                )));
            }
            weights.extend(row);
        }
        Self::from_flat(n_rows, n_cols, weights)
    }

    pub fn from_flat(rows: usize, cols: usize, weights: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("empty {rows}x{cols} matrix")));
        }
        if weights.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} weights cannot fill a {rows}x{cols} matrix",
                weights.len()
            )));
        }
        if let Some(pos) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "weight at row {}, column {} is {} (weights must be finite and non-negative)",
                pos / cols,
                pos % cols,
                weights[pos]
            )));
        }
        Ok(Self {
            rows,
            cols,
            weights,
        })
    }

    /// Number of hypothesis tokens.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of source tokens.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.weights[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.weights.chunks_exact(self.cols)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + Clone + '_ {
        (0..self.rows).map(move |j| self.get(j, col))
    }

    /// Total attention received by each source token.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for (sum, w) in sums.iter_mut().zip(row) {
                *sum += w;
            }
        }
        sums
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }
}

/// One source sentence, its translation and the attention between them.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentRecord {
    id: String,
    src_tokens: Vec<String>,
    hyp_tokens: Vec<String>,
    attention: AttentionMatrix,
    ref_text: Option<String>,
}

impl AlignmentRecord {
    /// Builds a record, checking that the matrix has one row per hypothesis
    /// token and one column per source token.
    ///
    /// Tokens must be non-empty and free of whitespace, ids must be non-empty
    /// and free of whitespace, and references may not contain tabs or line
    /// breaks. A blank reference is treated as absent.
    pub fn new(
        id: impl Into<String>,
        src_tokens: Vec<String>,
        hyp_tokens: Vec<String>,
        attention: AttentionMatrix,
        ref_text: Option<String>,
    ) -> Result<Self> {
        let id = id.into();
        let invalid = |reason: String| Error::InvalidRecord {
            id: id.clone(),
            reason,
        };
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(invalid(format!(
                "id {id:?} must be non-empty without whitespace"
            )));
        }
        check_tokens(&src_tokens, "source").map_err(&invalid)?;
        check_tokens(&hyp_tokens, "hypothesis").map_err(&invalid)?;
        let ref_text = ref_text.filter(|r| !r.trim().is_empty());
        if let Some(r) = &ref_text {
            if r.contains(['\t', '\n', '\r']) {
                return Err(invalid("reference contains a tab or line break".into()));
            }
        }
        if attention.rows() != hyp_tokens.len() || attention.cols() != src_tokens.len() {
            return Err(Error::Dimension {
                id,
                reason: format!(
                    "attention is {}x{} but there are {} hypothesis and {} source tokens",
                    attention.rows(),
                    attention.cols(),
                    hyp_tokens.len(),
                    src_tokens.len()
                ),
            });
        }
        Ok(Self {
            id,
            src_tokens,
            hyp_tokens,
            attention,
            ref_text,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn src_tokens(&self) -> &[String] {
        &self.src_tokens
    }

    pub fn hyp_tokens(&self) -> &[String] {
        &self.hyp_tokens
    }

    pub fn attention(&self) -> &AttentionMatrix {
        &self.attention
    }

    pub fn ref_text(&self) -> Option<&str> {
        self.ref_text.as_deref()
    }

    pub fn src_len(&self) -> usize {
        self.src_tokens.len()
    }

    pub fn hyp_len(&self) -> usize {
        self.hyp_tokens.len()
    }

    /// Source tokens joined by single spaces.
    pub fn src_text(&self) -> String {
        self.src_tokens.join(" ")
    }

    /// Hypothesis tokens joined by single spaces.
    pub fn hyp_text(&self) -> String {
        self.hyp_tokens.join(" ")
    }

    pub fn with_reference(mut self, reference: Option<String>) -> Result<Self> {
        let reference = reference.filter(|r| !r.trim().is_empty());
        if let Some(r) = &reference {
            if r.contains(['\t', '\n', '\r']) {
                return Err(Error::InvalidRecord {
                    id: self.id,
                    reason: "reference contains a tab or line break".into(),
                });
            }
        }
        self.ref_text = reference;
        Ok(self)
    }

    pub fn validate(&self) -> Vec<ValidationWarning> {
        validate_record(self)
    }
}

fn check_tokens(tokens: &[String], side: &str) -> std::result::Result<(), String> {
    if tokens.is_empty() {
        return Err(format!("{side} has no tokens"));
    }
    for (k, tok) in tokens.iter().enumerate() {
        if tok.is_empty() {
            return Err(format!("{side} token {k} is empty"));
        }
        if tok.chars().any(char::is_whitespace) {
            return Err(format!("{side} token {k} ({tok:?}) contains whitespace"));
        }
    }
    Ok(())
}

/// A non-fatal problem with an attention matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationWarning {
    RowSum { row: usize, sum: f64 },
    ZeroRow { row: usize },
    WeightAboveOne { count: usize, max: f64 },
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::RowSum { row, sum } => {
                write!(f, "row {row} sums to {sum}, not 1")
            }
            ValidationWarning::ZeroRow { row } => write!(f, "row {row} is all zero"),
            ValidationWarning::WeightAboveOne { count, max } => {
                write!(f, "{count} weight(s) exceed 1 (max {max})")
            }
        }
    }
}

/// Checks how far a record's attention is from being row-stochastic.
///
/// Summed multi-layer attention legitimately breaks these checks, so the
/// result is advisory and the record stays usable.
pub fn validate_record(record: &AlignmentRecord) -> Vec<ValidationWarning> {
    let mut warnings = Vec::new();
    let matrix = record.attention();
    for (j, row) in matrix.iter_rows().enumerate() {
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            warnings.push(ValidationWarning::RowSum { row: j, sum });
        }
        if row.iter().all(|w| *w == 0.0) {
            warnings.push(ValidationWarning::ZeroRow { row: j });
        }
    }
    let above: Vec<f64> = matrix
        .as_slice()
        .iter()
        .copied()
        .filter(|w| *w > 1.0 + ROW_SUM_TOLERANCE)
        .collect();
    if !above.is_empty() {
        warnings.push(ValidationWarning::WeightAboveOne {
            count: above.len(),
            max: above.iter().copied().fold(0.0, f64::max),
        });
    }
    warnings
}

/// The output of one translation system, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    system_name: String,
    records: Vec<AlignmentRecord>,
}

impl Dataset {
    /// Tabs and line breaks in `system_name` are replaced by spaces.
    pub fn new(system_name: impl Into<String>, records: Vec<AlignmentRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = HashSet::with_capacity(records.len());
        for record in &records {
            if !seen.insert(record.id()) {
                return Err(Error::DuplicateId(record.id().to_owned()));
            }
        }
        Ok(Self {
            system_name: clean_name(system_name.into()),
            records,
        })
    }

    pub fn system_name(&self) -> &str {
        &self.system_name
    }

    pub fn with_system_name(mut self, name: impl Into<String>) -> Self {
        self.system_name = clean_name(name.into());
        self
    }

    pub fn records(&self) -> &[AlignmentRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, position: usize) -> Option<&AlignmentRecord> {
        self.records.get(position)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AlignmentRecord> {
        self.records.iter()
    }

    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.records.iter().position(|r| r.id() == id)
    }

    pub fn has_references(&self) -> bool {
        self.records.iter().all(|r| r.ref_text().is_some())
    }

    pub fn into_records(self) -> Vec<AlignmentRecord> {
        self.records
    }
}

fn clean_name(name: String) -> String {
    if name.contains(['\t', '\n', '\r']) {
        name.replace(['\t', '\n', '\r'], " ")
    } else {
        name
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a AlignmentRecord;
    type IntoIter = std::slice::Iter<'a, AlignmentRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[cfg(test)]
pub(crate) fn toks(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}
