//! Scored datasets: batch scoring, sort orders, two-system pairing and the
//! on-disk index file.
//!
//! # Index file, version 1
//!
//! UTF-8, every line terminated by `\n`:
//!
//! ```text
//! %attnscope-index 1
//! %system <record count> <system name>
//! %thresholds <low %> <overlap %> <long tokens> <low BLEU> <normal %>
//! <id>\t<src>\t<hyp>\t<matrix>\t<reference or empty>\t<scores>
//! ...
//! ```
//!
//! A paired index repeats the `%system` section once more for the second
//! system. The first five record fields follow the canonical line-record
//! format; the score field is a space-separated list of
//! `cdp= ap_out= ap_in= sim= op= conf= overlap= bleu= flags=`, where absent
//! values are written as `-` and BLEU as `value/p1,p2,p3,p4/brevity`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::alignment::{AlignmentRecord, Dataset};
use crate::bleu::{BleuScore, MAX_ORDER};
use crate::diagnostics::{compute_flags, FlagKind, FlagThresholds};
use crate::error::{Error, Result};
use crate::format::canonical::{parse_line, write_record};
use crate::format::{format_float, DEFAULT_SYSTEM_NAME};
use crate::metrics::{score_record_with, ScoreSet};

pub const INDEX_VERSION: u32 = 1;
const MAGIC: &str = "%attnscope-index";

/// A dataset together with one [`ScoreSet`] per record, in record order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDataset {
    dataset: Dataset,
    scores: Vec<ScoreSet>,
    thresholds: FlagThresholds,
}

impl ScoredDataset {
    pub fn score(dataset: Dataset) -> Result<Self> {
        Self::score_with(dataset, FlagThresholds::default())
    }

    /// Scores every record in parallel; the result does not depend on the
    /// number of threads.
    pub fn score_with(dataset: Dataset, thresholds: FlagThresholds) -> Result<Self> {
        let scores = dataset
            .records()
            .par_iter()
            .map(|record| {
                score_record_with(record, &thresholds).map_err(|e| match e {
                    scoring @ Error::Scoring { .. } => scoring,
                    other => Error::Scoring {
                        id: record.id().to_owned(),
                        source: Box::new(other),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dataset,
            scores,
            thresholds,
        })
    }

    /// Pairs precomputed scores with their dataset. The flags inside
    /// `scores` are taken as given.
    pub fn from_parts(
        dataset: Dataset,
        scores: Vec<ScoreSet>,
        thresholds: FlagThresholds,
    ) -> Result<Self> {
        if scores.len() != dataset.len() {
            return Err(Error::ScoreCount {
                records: dataset.len(),
                scores: scores.len(),
            });
        }
        Ok(Self {
            dataset,
            scores,
            thresholds,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn scores(&self) -> &[ScoreSet] {
        &self.scores
    }

    pub fn thresholds(&self) -> &FlagThresholds {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn system_name(&self) -> &str {
        self.dataset.system_name()
    }

    pub fn has_references(&self) -> bool {
        self.dataset.has_references()
    }

    pub fn get(&self, position: usize) -> Option<(&AlignmentRecord, &ScoreSet)> {
        Some((self.dataset.get(position)?, self.scores.get(position)?))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&AlignmentRecord, &ScoreSet)> + '_ {
        self.dataset.records().iter().zip(&self.scores)
    }

    /// Record positions ordered by `key`. Ties keep ascending position in
    /// both directions.
    pub fn sort_indices(&self, key: SortKey) -> Result<Vec<usize>> {
        sort_indices(self, key)
    }
}

pub fn score_dataset(dataset: Dataset) -> Result<ScoredDataset> {
    ScoredDataset::score(dataset)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortField {
    Confidence,
    Cdp,
    ApIn,
    ApOut,
    Overlap,
    Bleu,
}

impl SortField {
    pub const ALL: [SortField; 6] = [
        SortField::Confidence,
        SortField::Cdp,
        SortField::ApIn,
        SortField::ApOut,
        SortField::Overlap,
        SortField::Bleu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SortField::Confidence => "confidence",
            SortField::Cdp => "cdp",
            SortField::ApIn => "ap_in",
            SortField::ApOut => "ap_out",
            SortField::Overlap => "overlap",
            SortField::Bleu => "bleu",
        }
    }

    /// The value sorted on; `None` only for BLEU on reference-less records.
    pub fn value(self, scores: &ScoreSet) -> Option<f64> {
        match self {
            SortField::Confidence => Some(scores.confidence),
            SortField::Cdp => Some(scores.cdp),
            SortField::ApIn => Some(scores.ap_in),
            SortField::ApOut => Some(scores.ap_out),
            SortField::Overlap => Some(scores.similarity),
            SortField::Bleu => scores.bleu.map(|b| b.value),
        }
    }
}

impl fmt::Display for SortField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SortField {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SortField::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                format!("unknown sort key {s:?} (expected confidence, cdp, ap_in, ap_out, overlap or bleu)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    #[default]
    Ascending,
    Descending,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Ascending => "asc",
            Direction::Descending => "desc",
        }
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "asc" => Ok(Direction::Ascending),
            "desc" => Ok(Direction::Descending),
            other => Err(format!(
                "unknown direction {other:?} (expected asc or desc)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SortKey {
    pub field: SortField,
    pub direction: Direction,
}

impl SortKey {
    pub fn new(field: SortField, direction: Direction) -> Self {
        Self { field, direction }
    }
}

pub fn sort_indices(scored: &ScoredDataset, key: SortKey) -> Result<Vec<usize>> {
    if key.field == SortField::Bleu && !scored.has_references() {
        return Err(Error::BleuUnavailable);
    }
    let values: Vec<f64> = scored
        .scores()
        .iter()
        .map(|s| key.field.value(s).ok_or(Error::BleuUnavailable))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort, so equal values keep ascending position either way.
    match key.direction {
        Direction::Ascending => order.sort_by(|&a, &b| values[a].total_cmp(&values[b])),
        Direction::Descending => order.sort_by(|&a, &b| values[b].total_cmp(&values[a])),
    }
    Ok(order)
}

/// Two systems' records for the same source sentence.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonPair<'a> {
    pub position: usize,
    pub source_id: &'a str,
    pub record_a: &'a AlignmentRecord,
    pub record_b: &'a AlignmentRecord,
    pub scores_a: &'a ScoreSet,
    pub scores_b: &'a ScoreSet,
}

/// Pairs records by position. Every position must carry the same source
/// tokens in both datasets; hypotheses may differ freely.
pub fn pair_datasets<'a>(
    a: &'a ScoredDataset,
    b: &'a ScoredDataset,
) -> Result<Vec<ComparisonPair<'a>>> {
    if a.len() != b.len() {
        return Err(Error::PairLength {
            a: a.len(),
            b: b.len(),
        });
    }
    a.iter()
        .zip(b.iter())
        .enumerate()
        .map(|(position, ((record_a, scores_a), (record_b, scores_b)))| {
            if record_a.src_tokens() != record_b.src_tokens() {
                return Err(Error::SourceMismatch {
                    position,
                    source_a: record_a.src_text(),
                    source_b: record_b.src_text(),
                });
            }
            Ok(ComparisonPair {
                position,
                source_id: record_a.id(),
                record_a,
                record_b,
                scores_a,
                scores_b,
            })
        })
        .collect()
}

/// Contents of an index file.
#[derive(Debug, Clone, PartialEq)]
pub enum Index {
    Single(ScoredDataset),
    /// Two systems over identical sources, in comparison order.
    Paired(ScoredDataset, ScoredDataset),
}

impl Index {
    pub fn paired(a: ScoredDataset, b: ScoredDataset) -> Result<Self> {
        pair_datasets(&a, &b)?;
        Ok(Index::Paired(a, b))
    }

    pub fn datasets(&self) -> Vec<&ScoredDataset> {
        match self {
            Index::Single(d) => vec![d],
            Index::Paired(a, b) => vec![a, b],
        }
    }

    pub fn into_single(self) -> Option<ScoredDataset> {
        match self {
            Index::Single(d) => Some(d),
            Index::Paired(..) => None,
        }
    }
}

pub fn serialize_index(index: &Index) -> Vec<u8> {
    serialize_sections(&index.datasets())
}

fn serialize_sections(sections: &[&ScoredDataset]) -> Vec<u8> {
    let mut out = format!("{MAGIC} {INDEX_VERSION}\n");
    for scored in sections {
        write_section(&mut out, scored);
    }
    out.into_bytes()
}

fn write_section(out: &mut String, scored: &ScoredDataset) {
    let t = scored.thresholds();
    out.push_str(&format!(
        "%system {} {}\n",
        scored.len(),
        scored.system_name()
    ));
    out.push_str(&format!(
        "%thresholds {} {} {} {} {}\n",
        format_float(t.low_attention_percent),
        format_float(t.overlap_percent),
        t.long_sentence_tokens,
        format_float(t.low_bleu_points),
        format_float(t.normal_attention_percent),
    ));
    for (record, scores) in scored.iter() {
        write_record(out, record);
        if record.ref_text().is_none() {
            out.push('\t');
        }
        out.push('\t');
        write_scores(out, scores);
        out.push('\n');
    }
}

fn opt_float(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_owned(), format_float)
}

fn write_scores(out: &mut String, s: &ScoreSet) {
    let bleu = match &s.bleu {
        None => "-".to_owned(),
        Some(b) => {
            let precisions: Vec<String> = b.precisions.iter().map(|p| opt_float(*p)).collect();
            format!(
                "{}/{}/{}",
                format_float(b.value),
                precisions.join(","),
                format_float(b.brevity_penalty)
            )
        }
    };
    let flags = if s.flags.is_empty() {
        "-".to_owned()
    } else {
        let names: Vec<&str> = s.flags.iter().map(|f| f.kind().as_str()).collect();
        names.join(",")
    };
    out.push_str(&format!(
        "cdp={} ap_out={} ap_in={} sim={} op={} conf={} overlap={} bleu={bleu} flags={flags}",
        format_float(s.cdp),
        format_float(s.ap_out),
        format_float(s.ap_in),
        format_float(s.similarity),
        opt_float(s.op),
        format_float(s.confidence),
        format_float(s.overlap_percent),
    ));
}

struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    /// Next `\n`-terminated line with its byte offset.
    fn next(&mut self) -> Result<Option<(usize, &'a str)>> {
        if self.pos == self.text.len() {
            return Ok(None);
        }
        let start = self.pos;
        match self.text[start..].find('\n') {
            Some(end) => {
                self.pos = start + end + 1;
                Ok(Some((start, &self.text[start..start + end])))
            }
            None => Err(Error::corrupt(
                self.text.len(),
                "file is truncated (last line has no terminator)",
            )),
        }
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next()?.ok_or_else(|| {
            Error::corrupt(
                self.text.len(),
                format!("file is truncated (expected {what})"),
            )
        })
    }
}

pub fn parse_index(bytes: &[u8]) -> Result<Index> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::corrupt(e.valid_up_to(), "index is not valid UTF-8"))?;
    let mut cursor = LineCursor { text, pos: 0 };
    let (_, header) = cursor.expect("header")?;
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::corrupt(0, "missing index header"))?;
    if version != INDEX_VERSION.to_string() {
        return Err(Error::IndexVersion {
            found: version.to_owned(),
            expected: INDEX_VERSION,
        });
    }

    let mut sections = Vec::new();
    while let Some((offset, line)) = cursor.next()? {
        if sections.len() == 2 {
            return Err(Error::corrupt(
                offset,
                "unexpected data after the second system",
            ));
        }
        sections.push(parse_section(&mut cursor, offset, line)?);
    }
    let mut sections = sections.into_iter();
    match (sections.next(), sections.next()) {
        (Some(a), None) => Ok(Index::Single(a)),
        (Some(a), Some(b)) => {
            Index::paired(a, b).map_err(|e| Error::corrupt(text.len(), e.to_string()))
        }
        (None, _) => Err(Error::corrupt(text.len(), "index holds no system")),
    }
}

fn parse_section(cursor: &mut LineCursor<'_>, offset: usize, line: &str) -> Result<ScoredDataset> {
    let rest = line
        .strip_prefix("%system ")
        .ok_or_else(|| Error::corrupt(offset, "expected `%system` line"))?;
    let (count, name) = rest.split_once(' ').unwrap_or((rest, ""));
    let count: usize = count
        .parse()
        .map_err(|_| Error::corrupt(offset, format!("bad record count {count:?}")))?;
    let name = if name.is_empty() {
        DEFAULT_SYSTEM_NAME
    } else {
        name
    };

    let (t_offset, t_line) = cursor.expect("`%thresholds` line")?;
    let thresholds = parse_thresholds(t_line)
        .ok_or_else(|| Error::corrupt(t_offset, "bad `%thresholds` line"))?;

    let mut records = Vec::with_capacity(count);
    let mut scores = Vec::with_capacity(count);
    for k in 0..count {
        let (offset, line) = cursor.expect(&format!("record {} of {count}", k + 1))?;
        let (record_part, score_part) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::corrupt(offset, "record line has no score field"))?;
        let record =
            parse_line(record_part, k).map_err(|e| Error::corrupt(offset, e.to_string()))?;
        let (mut score, stored_flags) =
            parse_scores(score_part).map_err(|reason| Error::corrupt(offset, reason))?;
        score.flags = compute_flags(&record, &score, &thresholds);
        let kinds: Vec<FlagKind> = score.flags.iter().map(|f| f.kind()).collect();
        if kinds != stored_flags {
            return Err(Error::corrupt(
                offset,
                "stored flags disagree with stored scores",
            ));
        }
        records.push(record);
        scores.push(score);
    }
    let dataset = Dataset::new(name, records).map_err(|e| Error::corrupt(offset, e.to_string()))?;
    Ok(ScoredDataset {
        dataset,
        scores,
        thresholds,
    })
}

fn parse_thresholds(line: &str) -> Option<FlagThresholds> {
    let fields: Vec<&str> = line.strip_prefix("%thresholds ")?.split(' ').collect();
    let [low, overlap, long, bleu, normal] = fields.as_slice() else {
        return None;
    };
    Some(FlagThresholds {
        low_attention_percent: low.parse().ok()?,
        overlap_percent: overlap.parse().ok()?,
        long_sentence_tokens: long.parse().ok()?,
        low_bleu_points: bleu.parse().ok()?,
        normal_attention_percent: normal.parse().ok()?,
    })
}

/// Parses a score field. Flags come back as bare kinds, separately from the
/// scores, whose `flags` is left empty for the caller to recompute.
fn parse_scores(field: &str) -> std::result::Result<(ScoreSet, Vec<FlagKind>), String> {
    const KEYS: [&str; 9] = [
        "cdp", "ap_out", "ap_in", "sim", "op", "conf", "overlap", "bleu", "flags",
    ];
    let parts: Vec<&str> = field.split(' ').collect();
    if parts.len() != KEYS.len() {
        return Err(format!(
            "expected {} score entries, found {}",
            KEYS.len(),
            parts.len()
        ));
    }
    let mut values = [""; 9];
    for ((slot, key), part) in values.iter_mut().zip(KEYS).zip(&parts) {
        *slot = part
            .strip_prefix(key)
            .and_then(|p| p.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=`, found {part:?}"))?;
    }
    let num = |k: usize| -> std::result::Result<f64, String> {
        values[k]
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad {} value {:?}", KEYS[k], values[k]))
    };
    let opt = |text: &str, what: &str| -> std::result::Result<Option<f64>, String> {
        if text == "-" {
            return Ok(None);
        }
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Some)
            .ok_or_else(|| format!("bad {what} value {text:?}"))
    };
    let bleu = if values[7] == "-" {
        None
    } else {
        let bad = || format!("bad bleu value {:?}", values[7]);
        let mut pieces = values[7].split('/');
        let (Some(value), Some(precisions), Some(bp), None) =
            (pieces.next(), pieces.next(), pieces.next(), pieces.next())
        else {
            return Err(bad());
        };
        let precisions: Vec<Option<f64>> = precisions
            .split(',')
            .map(|p| opt(p, "precision"))
            .collect::<std::result::Result<_, _>>()?;
        let precisions: [Option<f64>; MAX_ORDER] = precisions.try_into().map_err(|_| bad())?;
        Some(BleuScore {
            value: opt(value, "bleu")?.ok_or_else(bad)?,
            precisions,
            brevity_penalty: opt(bp, "brevity")?.ok_or_else(bad)?,
        })
    };
    let flags = if values[8] == "-" {
        Vec::new()
    } else {
        values[8]
            .split(',')
            .map(str::parse::<FlagKind>)
            .collect::<std::result::Result<_, _>>()?
    };
    let scores = ScoreSet {
        cdp: num(0)?,
        ap_out: num(1)?,
        ap_in: num(2)?,
        similarity: num(3)?,
        op: opt(values[4], "op")?,
        confidence: num(5)?,
        overlap_percent: num(6)?,
        bleu,
        flags: Vec::new(),
    };
    Ok((scores, flags))
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn save_index(scored: &ScoredDataset, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &serialize_sections(&[scored]))
}

pub fn save_paired_index(
    a: &ScoredDataset,
    b: &ScoredDataset,
    path: impl AsRef<Path>,
) -> Result<()> {
    pair_datasets(a, b)?;
    write_atomic(path.as_ref(), &serialize_sections(&[a, b]))
}

pub fn load_index(path: impl AsRef<Path>) -> Result<Index> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_index(&bytes)
}
