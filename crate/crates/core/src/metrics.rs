//! Reference-free confidence scoring from attention weights.
//!
//! All penalties live in the log domain (natural logarithm, `0 ln 0 = 0`)
//! and are at most zero for attention penalties; [`to_percent`] maps them to
//! the `[0, 100]` display scale.

use crate::alignment::{AlignmentRecord, AttentionMatrix};
use crate::bleu::{sentence_bleu, BleuScore};
use crate::diagnostics::{compute_flags, DiagnosticFlag, FlagThresholds};
use crate::error::{Error, Result};
use crate::similarity::similarity;

/// Similarity from which the overlap penalty is applied.
pub const OVERLAP_THRESHOLD: f64 = 0.3;

/// Rows whose sum is within this of 1 are used as-is by [`absentmindedness_out`].
const RENORMALIZE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    pub cdp: f64,
    pub ap_out: f64,
    pub ap_in: f64,
    pub similarity: f64,
    /// Present iff `similarity >= OVERLAP_THRESHOLD`.
    pub op: Option<f64>,
    pub confidence: f64,
    pub overlap_percent: f64,
    pub bleu: Option<BleuScore>,
    pub flags: Vec<DiagnosticFlag>,
}

impl ScoreSet {
    /// CDP + AP_out + AP_in, i.e. confidence without the overlap penalty.
    pub fn component_sum(&self) -> f64 {
        self.cdp + self.ap_out + self.ap_in
    }

    pub fn confidence_percent(&self) -> f64 {
        to_percent(self.confidence)
    }

    pub fn cdp_percent(&self) -> f64 {
        to_percent(self.cdp)
    }

    pub fn ap_out_percent(&self) -> f64 {
        to_percent(self.ap_out)
    }

    pub fn ap_in_percent(&self) -> f64 {
        to_percent(self.ap_in)
    }

    pub fn bleu_percent(&self) -> Option<f64> {
        self.bleu.map(|b| 100.0 * b.value)
    }
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        // Weights a hair above 1 in an un-renormalized row would turn positive.
        (p * p.ln()).min(0.0)
    } else {
        0.0
    }
}

/// Negative entropy of a distribution, renormalizing it first unless
/// `only_if_off` is set and it already sums to 1 within [`RENORMALIZE_EPS`].
fn neg_entropy(weights: impl Iterator<Item = f64> + Clone, only_if_off: bool) -> f64 {
    let sum: f64 = weights.clone().sum();
    if sum == 0.0 {
        return 0.0;
    }
    if only_if_off && (sum - 1.0).abs() <= RENORMALIZE_EPS {
        weights.map(xlogx).sum()
    } else {
        weights.map(|w| xlogx(w / sum)).sum()
    }
}

/// Coverage deviation penalty: penalizes source tokens whose received
/// attention strays from 1 in either direction.
pub fn coverage_deviation_penalty(attention: &AttentionMatrix) -> f64 {
    let src_len = attention.cols() as f64;
    let total: f64 = attention
        .column_sums()
        .into_iter()
        .map(|coverage| (1.0 + (1.0 - coverage).powi(2)).ln())
        .sum();
    // Subtracting from zero keeps a perfect score at +0 rather than -0.
    0.0 - total / src_len
}

/// Output absentmindedness: how diffusely each hypothesis token attends
/// over the source.
pub fn absentmindedness_out(attention: &AttentionMatrix) -> f64 {
    let src_len = attention.cols() as f64;
    let total: f64 = attention
        .iter_rows()
        .map(|row| neg_entropy(row.iter().copied(), true))
        .sum();
    total / src_len
}

/// Input absentmindedness: how widely each source token's attention is
/// spread across hypothesis tokens.
pub fn absentmindedness_in(attention: &AttentionMatrix) -> f64 {
    let src_len = attention.cols() as f64;
    let total: f64 = (0..attention.cols())
        .map(|i| neg_entropy(attention.column(i), false))
        .sum();
    total / src_len
}

/// Overlap penalty for a hypothesis of `hyp_len` tokens with source
/// similarity `similarity`. Negative for similarities in `[0.3, 0.4)`.
pub fn overlap_penalty(hyp_len: usize, similarity: f64) -> f64 {
    (0.8 + (hyp_len as f64 * 0.01))
        * (3.0 - ((1.0 - similarity) * 5.0))
        * (0.7 + similarity)
        * similarity.tan()
}

pub fn confidence(cdp: f64, ap_out: f64, ap_in: f64, hyp_len: usize, similarity: f64) -> f64 {
    let sum = cdp + ap_out + ap_in;
    if similarity < OVERLAP_THRESHOLD {
        sum
    } else {
        sum - overlap_penalty(hyp_len, similarity)
    }
}

/// `100 * exp(log_score)`, clamped to `[0, 100]`.
pub fn to_percent(log_score: f64) -> f64 {
    (100.0 * log_score.exp()).clamp(0.0, 100.0)
}

pub fn score_record(record: &AlignmentRecord) -> Result<ScoreSet> {
    score_record_with(record, &FlagThresholds::default())
}

/// Scores a record and evaluates its diagnostic flags with `thresholds`.
/// BLEU is computed only when the record carries a reference and never
/// feeds into the confidence.
pub fn score_record_with(
    record: &AlignmentRecord,
    thresholds: &FlagThresholds,
) -> Result<ScoreSet> {
    let attention = record.attention();
    let cdp = coverage_deviation_penalty(attention);
    let ap_out = absentmindedness_out(attention);
    let ap_in = absentmindedness_in(attention);
    let sim = similarity(&record.src_text(), &record.hyp_text());
    let op = (sim >= OVERLAP_THRESHOLD).then(|| overlap_penalty(record.hyp_len(), sim));
    let confidence = confidence(cdp, ap_out, ap_in, record.hyp_len(), sim);
    let bleu = record
        .ref_text()
        .map(|r| {
            let reference: Vec<&str> = r.split_whitespace().collect();
            sentence_bleu(record.hyp_tokens(), &reference)
        })
        .transpose()
        .map_err(|e| Error::Scoring {
            id: record.id().to_owned(),
            source: Box::new(e),
        })?;
    let mut scores = ScoreSet {
        cdp,
        ap_out,
        ap_in,
        similarity: sim,
        op,
        confidence,
        overlap_percent: 100.0 * sim,
        bleu,
        flags: Vec::new(),
    };
    scores.flags = compute_flags(record, &scores, thresholds);
    Ok(scores)
}
