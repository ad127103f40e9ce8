//! Core library for inspecting neural machine translation output through its
//! attention alignments.
//!
//! The crate is organised bottom-up:
//!
//! * [`alignment`] holds the data model (records, matrices, datasets) and
//!   [`format`] reads and writes the two on-disk alignment formats.
//! * [`metrics`], [`similarity`] and [`bleu`] score a single record.
//! * [`diagnostics`] turns scores into debugging flags.
//! * [`index`] scores whole datasets, sorts them, pairs two systems and
//!   persists the result.
//! * [`render`] draws matrices to the terminal and to SVG.

pub mod alignment;
pub mod bleu;
pub mod diagnostics;
pub mod error;
pub mod format;
pub mod index;
pub mod metrics;
pub mod render;
pub mod similarity;

#[cfg(test)]
pub(crate) mod test_support;

pub use alignment::{AlignmentRecord, AttentionMatrix, Dataset, ValidationWarning};
pub use bleu::{sentence_bleu, BleuScore};
pub use diagnostics::{compute_flags, DiagnosticFlag, FlagKind, FlagThresholds};
pub use error::{Error, Result};
pub use index::{
    load_index, pair_datasets, save_index, save_paired_index, ComparisonPair, Direction, Index,
    ScoredDataset, SortField, SortKey,
};
pub use metrics::{score_record, to_percent, ScoreSet};
pub use similarity::MatchSpan;
