//! JSON shapes returned by the API. Field order here is the field order on
//! the wire.

use attnscope_core::diagnostics::DiagnosticFlag;
use attnscope_core::similarity::longest_match_span;
use attnscope_core::{AlignmentRecord, BleuScore, ScoreSet};
use serde::Serialize;

/// Overlap above which detail responses include the longest shared span.
pub const MATCH_SPAN_MIN_OVERLAP: f64 = 10.0;

const SNIPPET_CHARS: usize = 120;

fn snippet(text: String) -> String {
    if text.chars().count() <= SNIPPET_CHARS {
        return text;
    }
    let mut s: String = text.chars().take(SNIPPET_CHARS - 1).collect();
    s.push('…');
    s
}

#[derive(Debug, Serialize)]
pub struct Percents {
    pub confidence: f64,
    pub cdp: f64,
    pub ap_out: f64,
    pub ap_in: f64,
    pub overlap: f64,
    pub bleu: Option<f64>,
}

impl Percents {
    pub fn new(scores: &ScoreSet) -> Self {
        Self {
            confidence: scores.confidence_percent(),
            cdp: scores.cdp_percent(),
            ap_out: scores.ap_out_percent(),
            ap_in: scores.ap_in_percent(),
            overlap: scores.overlap_percent,
            bleu: scores.bleu_percent(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub id: String,
    pub position: usize,
    pub src: String,
    pub hyp: String,
    pub src_len: usize,
    pub hyp_len: usize,
    pub percents: Percents,
    pub flags: Vec<&'static str>,
}

impl Summary {
    pub fn new(position: usize, record: &AlignmentRecord, scores: &ScoreSet) -> Self {
        Self {
            id: record.id().to_owned(),
            position,
            src: snippet(record.src_text()),
            hyp: snippet(record.hyp_text()),
            src_len: record.src_len(),
            hyp_len: record.hyp_len(),
            percents: Percents::new(scores),
            flags: scores.flags.iter().map(|f| f.kind().as_str()).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Page {
    pub system: String,
    pub sort: &'static str,
    pub dir: &'static str,
    pub offset: usize,
    pub limit: usize,
    pub total: usize,
    pub records: Vec<Summary>,
}

#[derive(Debug, Serialize)]
pub struct Bleu {
    pub value: f64,
    pub precisions: [Option<f64>; 4],
    pub brevity_penalty: f64,
}

impl From<BleuScore> for Bleu {
    fn from(b: BleuScore) -> Self {
        Self {
            value: b.value,
            precisions: b.precisions,
            brevity_penalty: b.brevity_penalty,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flag {
    LowAttentionQuality {
        metric: &'static str,
        percent: f64,
    },
    PossibleUntranslated {
        hyp_tokens: usize,
        overlap_percent: f64,
    },
    ReferenceDivergent {
        bleu_points: f64,
        min_attention_percent: f64,
    },
}

impl From<&DiagnosticFlag> for Flag {
    fn from(flag: &DiagnosticFlag) -> Self {
        match *flag {
            DiagnosticFlag::LowAttentionQuality { metric, percent } => Flag::LowAttentionQuality {
                metric: metric.as_str(),
                percent,
            },
            DiagnosticFlag::PossibleUntranslated {
                hyp_tokens,
                overlap_percent,
            } => Flag::PossibleUntranslated {
                hyp_tokens,
                overlap_percent,
            },
            DiagnosticFlag::ReferenceDivergent {
                bleu_points,
                min_attention_percent,
            } => Flag::ReferenceDivergent {
                bleu_points,
                min_attention_percent,
            },
        }
    }
}

/// The raw log-domain scores.
#[derive(Debug, Serialize)]
pub struct Scores {
    pub cdp: f64,
    pub ap_out: f64,
    pub ap_in: f64,
    pub similarity: f64,
    pub op: Option<f64>,
    pub confidence: f64,
    pub overlap_percent: f64,
    pub bleu: Option<Bleu>,
}

impl Scores {
    pub fn new(s: &ScoreSet) -> Self {
        Self {
            cdp: s.cdp,
            ap_out: s.ap_out,
            ap_in: s.ap_in,
            similarity: s.similarity,
            op: s.op,
            confidence: s.confidence,
            overlap_percent: s.overlap_percent,
            bleu: s.bleu.map(Bleu::from),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Span {
    /// Half-open character ranges into `src_text` and `hyp_text`.
    pub src: [usize; 2],
    pub hyp: [usize; 2],
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct Detail {
    pub id: String,
    pub position: usize,
    pub src_tokens: Vec<String>,
    pub hyp_tokens: Vec<String>,
    pub src_text: String,
    pub hyp_text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ref_text: Option<String>,
    pub attention: Vec<Vec<f64>>,
    pub scores: Scores,
    pub percents: Percents,
    pub flags: Vec<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_span: Option<Span>,
}

impl Detail {
    pub fn new(position: usize, record: &AlignmentRecord, scores: &ScoreSet) -> Self {
        let src_text = record.src_text();
        let hyp_text = record.hyp_text();
        let match_span = (scores.overlap_percent > MATCH_SPAN_MIN_OVERLAP).then(|| {
            let span = longest_match_span(&src_text, &hyp_text);
            Span {
                src: [span.src_char_range.start, span.src_char_range.end],
                hyp: [span.hyp_char_range.start, span.hyp_char_range.end],
                text: span.hyp_slice(&hyp_text),
            }
        });
        Self {
            id: record.id().to_owned(),
            position,
            src_tokens: record.src_tokens().to_vec(),
            hyp_tokens: record.hyp_tokens().to_vec(),
            src_text,
            hyp_text,
            ref_text: record.ref_text().map(str::to_owned),
            attention: record.attention().to_rows(),
            scores: Scores::new(scores),
            percents: Percents::new(scores),
            flags: scores.flags.iter().map(Flag::from).collect(),
            match_span,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Systems {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Serialize)]
pub struct Comparison {
    pub position: usize,
    pub source_id: String,
    pub systems: Systems,
    pub a: Detail,
    pub b: Detail,
}

#[derive(Debug, Serialize)]
pub struct SortOption {
    pub key: &'static str,
    pub available: bool,
}

#[derive(Debug, Serialize)]
pub struct Thresholds {
    pub low_attention_percent: f64,
    pub overlap_percent: f64,
    pub long_sentence_tokens: usize,
    pub low_bleu_points: f64,
    pub normal_attention_percent: f64,
}

#[derive(Debug, Serialize)]
pub struct Meta {
    pub count: usize,
    pub systems: Vec<String>,
    pub has_references: bool,
    pub comparison: bool,
    pub format_version: u32,
    pub max_page_size: usize,
    pub sorts: Vec<SortOption>,
    pub thresholds: Thresholds,
}
