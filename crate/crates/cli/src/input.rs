//! Turning command-line sources into scored datasets.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use attnscope_core::alignment::ValidationWarning;
use attnscope_core::format::{InputFormat, DEFAULT_SYSTEM_NAME};
use attnscope_core::{load_index, Dataset, FlagThresholds, Index, ScoredDataset};

use crate::args::{InputArgs, SourceArgs, ThresholdArgs};

pub fn thresholds(base: FlagThresholds, args: &ThresholdArgs) -> FlagThresholds {
    FlagThresholds {
        low_attention_percent: args.low_attention.unwrap_or(base.low_attention_percent),
        overlap_percent: args.overlap_threshold.unwrap_or(base.overlap_percent),
        long_sentence_tokens: args.long_sentence.unwrap_or(base.long_sentence_tokens),
        low_bleu_points: args.low_bleu.unwrap_or(base.low_bleu_points),
        normal_attention_percent: args
            .normal_attention
            .unwrap_or(base.normal_attention_percent),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.trim().is_empty())
        .unwrap_or(DEFAULT_SYSTEM_NAME)
        .to_owned()
}

/// Reference lines must match the records one to one. A reference already
/// present in a record is kept; a conflicting line from the file only
/// produces a warning.
fn attach_references(dataset: Dataset, path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != dataset.len() {
        bail!(
            "{}: reference file has {} lines but the input has {} records",
            path.display(),
            lines.len(),
            dataset.len()
        );
    }
    let name = dataset.system_name().to_owned();
    let mut records = Vec::with_capacity(lines.len());
    for (k, (record, line)) in dataset.into_records().into_iter().zip(lines).enumerate() {
        let line = line.trim();
        match record.ref_text() {
            Some(existing) => {
                if existing != line {
                    eprintln!(
                        "warning: record {}: keeping its own reference over line {} of {}",
                        record.id(),
                        k + 1,
                        path.display()
                    );
                }
                records.push(record);
            }
            None => {
                let reference = (!line.is_empty()).then(|| line.to_owned());
                records.push(
                    record
                        .with_reference(reference)
                        .with_context(|| format!("{}: line {}", path.display(), k + 1))?,
                );
            }
        }
    }
    Ok(Dataset::new(name, records)?)
}

fn report_warnings(path: &Path, dataset: &Dataset) {
    let mut affected = 0;
    let mut first: Option<(String, ValidationWarning)> = None;
    for record in dataset {
        let warnings = record.validate();
        if let Some(w) = warnings.into_iter().next() {
            affected += 1;
            first.get_or_insert_with(|| (record.id().to_owned(), w));
        }
    }
    if let Some((id, warning)) = first {
        eprintln!(
            "warning: {}: {affected} of {} records have unusual attention weights (first: record {id}: {warning})",
            path.display(),
            dataset.len()
        );
    }
}

/// Reads, validates and scores one alignment file.
pub fn load_input(path: &Path, args: &InputArgs, name: Option<&str>) -> Result<ScoredDataset> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let format: InputFormat = args.format.into();
    let dataset = format
        .parse(&bytes)
        .with_context(|| format!("parsing {}", path.display()))?;
    let name = name.map(str::to_owned).unwrap_or_else(|| stem(path));
    let mut dataset = dataset.with_system_name(name);
    if let Some(refs) = &args.refs {
        dataset = attach_references(dataset, refs)?;
    }
    report_warnings(path, &dataset);
    let thresholds = thresholds(FlagThresholds::default(), &args.thresholds);
    Ok(ScoredDataset::score_with(dataset, thresholds)?)
}

/// Re-derives flags when thresholds are overridden on the command line.
fn rescore(scored: ScoredDataset, args: &ThresholdArgs) -> Result<ScoredDataset> {
    if args.is_empty() {
        return Ok(scored);
    }
    let thresholds = thresholds(*scored.thresholds(), args);
    Ok(ScoredDataset::score_with(
        scored.dataset().clone(),
        thresholds,
    )?)
}

pub fn load_index_file(path: &Path, args: &InputArgs) -> Result<Index> {
    if args.refs.is_some() {
        bail!("--refs applies to raw input, not to an index");
    }
    let index = load_index(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(match index {
        Index::Single(d) => Index::Single(rescore(d, &args.thresholds)?),
        Index::Paired(a, b) => {
            Index::Paired(rescore(a, &args.thresholds)?, rescore(b, &args.thresholds)?)
        }
    })
}

pub fn load_source(source: &SourceArgs, args: &InputArgs) -> Result<Index> {
    match (&source.index, &source.input) {
        (Some(index), _) => load_index_file(index, args),
        (None, Some(input)) => Ok(Index::Single(load_input(input, args, None)?)),
        (None, None) => unreachable!("clap requires one source"),
    }
}
