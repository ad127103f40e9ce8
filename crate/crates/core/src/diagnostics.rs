//! Debugging flags derived from a record's scores.
//!
//! Each flag encodes one heuristic for spotting translations worth a closer
//! look: weak attention on any metric, long hypotheses that mostly copy the
//! source, and good-looking attention paired with a low BLEU score (often a
//! valid translation that simply differs from the reference).

use std::fmt;
use std::str::FromStr;

use crate::alignment::AlignmentRecord;
use crate::metrics::{to_percent, ScoreSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagThresholds {
    /// Any attention percent below this marks weak attention.
    pub low_attention_percent: f64,
    /// Overlap percent at or above which long hypotheses are suspicious.
    pub overlap_percent: f64,
    /// Minimum hypothesis length, in tokens, for the overlap check.
    pub long_sentence_tokens: usize,
    /// BLEU points below which a reference is considered divergent.
    pub low_bleu_points: f64,
    /// Attention percents at or above this count as normal.
    pub normal_attention_percent: f64,
}

impl Default for FlagThresholds {
    fn default() -> Self {
        Self {
            low_attention_percent: 30.0,
            overlap_percent: 50.0,
            long_sentence_tokens: 10,
            low_bleu_points: 25.0,
            normal_attention_percent: 50.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlagKind {
    LowAttentionQuality,
    PossibleUntranslated,
    ReferenceDivergent,
}

impl FlagKind {
    pub const ALL: [FlagKind; 3] = [
        FlagKind::LowAttentionQuality,
        FlagKind::PossibleUntranslated,
        FlagKind::ReferenceDivergent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FlagKind::LowAttentionQuality => "LOW_ATTENTION_QUALITY",
            FlagKind::PossibleUntranslated => "POSSIBLE_UNTRANSLATED",
            FlagKind::ReferenceDivergent => "REFERENCE_DIVERGENT",
        }
    }
}

impl fmt::Display for FlagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlagKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FlagKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown flag {s:?}"))
    }
}

/// The attention-derived metrics shown as percentages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttentionMetric {
    Confidence,
    Cdp,
    ApIn,
    ApOut,
}

impl AttentionMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            AttentionMetric::Confidence => "confidence",
            AttentionMetric::Cdp => "cdp",
            AttentionMetric::ApIn => "ap_in",
            AttentionMetric::ApOut => "ap_out",
        }
    }
}

/// A raised flag together with the values that triggered it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagnosticFlag {
    LowAttentionQuality {
        metric: AttentionMetric,
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

impl DiagnosticFlag {
    pub fn kind(&self) -> FlagKind {
        match self {
            DiagnosticFlag::LowAttentionQuality { .. } => FlagKind::LowAttentionQuality,
            DiagnosticFlag::PossibleUntranslated { .. } => FlagKind::PossibleUntranslated,
            DiagnosticFlag::ReferenceDivergent { .. } => FlagKind::ReferenceDivergent,
        }
    }
}

impl fmt::Display for DiagnosticFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticFlag::LowAttentionQuality { metric, percent } => {
                write!(f, "{} ({} {percent:.2}%)", self.kind(), metric.as_str())
            }
            DiagnosticFlag::PossibleUntranslated {
                hyp_tokens,
                overlap_percent,
            } => write!(
                f,
                "{} ({hyp_tokens} tokens, overlap {overlap_percent:.2}%)",
                self.kind()
            ),
            DiagnosticFlag::ReferenceDivergent {
                bleu_points,
                min_attention_percent,
            } => write!(
                f,
                "{} (BLEU {bleu_points:.2}, attention >= {min_attention_percent:.2}%)",
                self.kind()
            ),
        }
    }
}

/// Percent views of confidence, CDP, AP_in and AP_out, in that order.
pub fn attention_percents(scores: &ScoreSet) -> [(AttentionMetric, f64); 4] {
    [
        (AttentionMetric::Confidence, to_percent(scores.confidence)),
        (AttentionMetric::Cdp, to_percent(scores.cdp)),
        (AttentionMetric::ApIn, to_percent(scores.ap_in)),
        (AttentionMetric::ApOut, to_percent(scores.ap_out)),
    ]
}

/// Evaluates every flag for a scored record. The `flags` field of `scores`
/// is ignored. Flags come back in [`FlagKind`] order.
pub fn compute_flags(
    record: &AlignmentRecord,
    scores: &ScoreSet,
    thresholds: &FlagThresholds,
) -> Vec<DiagnosticFlag> {
    let mut flags = Vec::new();
    let percents = attention_percents(scores);
    let (weakest, weakest_percent) =
        percents.iter().copied().fold(
            percents[0],
            |min, cur| if cur.1 < min.1 { cur } else { min },
        );

    if weakest_percent < thresholds.low_attention_percent {
        flags.push(DiagnosticFlag::LowAttentionQuality {
            metric: weakest,
            percent: weakest_percent,
        });
    }
    if record.hyp_len() >= thresholds.long_sentence_tokens
        && scores.overlap_percent >= thresholds.overlap_percent
    {
        flags.push(DiagnosticFlag::PossibleUntranslated {
            hyp_tokens: record.hyp_len(),
            overlap_percent: scores.overlap_percent,
        });
    }
    if let Some(bleu) = &scores.bleu {
        let bleu_points = 100.0 * bleu.value;
        if bleu_points < thresholds.low_bleu_points
            && weakest_percent >= thresholds.normal_attention_percent
        {
            flags.push(DiagnosticFlag::ReferenceDivergent {
                bleu_points,
                min_attention_percent: weakest_percent,
            });
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{toks, AttentionMatrix};
    use crate::bleu::BleuScore;

    fn record(hyp_len: usize) -> AlignmentRecord {
        let hyp: Vec<String> = (0..hyp_len).map(|k| format!("h{k}")).collect();
        let m = AttentionMatrix::from_flat(hyp_len, 1, vec![1.0; hyp_len]).unwrap();
        AlignmentRecord::new("r", toks("s"), hyp, m, None).unwrap()
    }

    fn scores(cdp_percent: f64, overlap: f64, bleu: Option<f64>) -> ScoreSet {
        let cdp = (cdp_percent / 100.0).ln();
        ScoreSet {
            cdp,
            ap_out: 0.0,
            ap_in: 0.0,
            similarity: overlap / 100.0,
            op: None,
            confidence: cdp,
            overlap_percent: overlap,
            bleu: bleu.map(|value| BleuScore {
                value,
                precisions: [Some(value); 4],
                brevity_penalty: 1.0,
            }),
            flags: Vec::new(),
        }
    }

    fn kinds(flags: &[DiagnosticFlag]) -> Vec<FlagKind> {
        flags.iter().map(DiagnosticFlag::kind).collect()
    }

    #[test]
    fn low_attention_boundary() {
        let t = FlagThresholds::default();
        let low = compute_flags(&record(3), &scores(29.9, 0.0, None), &t);
        assert_eq!(kinds(&low), [FlagKind::LowAttentionQuality]);
        match low[0] {
            DiagnosticFlag::LowAttentionQuality { percent, .. } => {
                assert!((percent - 29.9).abs() < 1e-9)
            }
            _ => unreachable!(),
        }
        assert!(compute_flags(&record(3), &scores(30.1, 0.0, None), &t).is_empty());
    }

    #[test]
    fn untranslated_needs_length_and_overlap() {
        let t = FlagThresholds::default();
        let hit = compute_flags(&record(10), &scores(100.0, 50.0, None), &t);
        assert_eq!(kinds(&hit), [FlagKind::PossibleUntranslated]);
        assert!(compute_flags(&record(9), &scores(100.0, 50.0, None), &t).is_empty());
        assert!(compute_flags(&record(10), &scores(100.0, 49.9, None), &t).is_empty());
    }

    #[test]
    fn reference_divergence() {
        let t = FlagThresholds::default();
        let hit = compute_flags(&record(3), &scores(80.0, 0.0, Some(0.1)), &t);
        assert_eq!(kinds(&hit), [FlagKind::ReferenceDivergent]);
        // Weak attention explains the low BLEU instead.
        let weak = compute_flags(&record(3), &scores(40.0, 0.0, Some(0.1)), &t);
        assert!(weak.is_empty());
        assert!(compute_flags(&record(3), &scores(80.0, 0.0, Some(0.3)), &t).is_empty());
        assert!(compute_flags(&record(3), &scores(80.0, 0.0, None), &t).is_empty());
    }

    #[test]
    fn thresholds_are_configurable() {
        let t = FlagThresholds {
            long_sentence_tokens: 3,
            ..FlagThresholds::default()
        };
        let hit = compute_flags(&record(3), &scores(100.0, 60.0, None), &t);
        assert_eq!(kinds(&hit), [FlagKind::PossibleUntranslated]);
    }

    #[test]
    fn flag_names_round_trip() {
        for kind in FlagKind::ALL {
            assert_eq!(kind.as_str().parse::<FlagKind>().unwrap(), kind);
        }
    }
}
