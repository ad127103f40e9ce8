//! Plain-text summaries and tables printed by the subcommands.

use std::fmt::Write as _;

use attnscope_core::{ComparisonPair, FlagKind, ScoreSet, ScoredDataset};

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn flag_count(scored: &ScoredDataset, kind: FlagKind) -> usize {
    scored
        .scores()
        .iter()
        .filter(|s| s.flags.iter().any(|f| f.kind() == kind))
        .count()
}

pub fn score_summary(scored: &ScoredDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", scored.system_name());
    let _ = writeln!(out, "records: {}", scored.len());
    let _ = writeln!(
        out,
        "mean confidence: {:.2}%",
        mean(scored.scores().iter().map(ScoreSet::confidence_percent))
    );
    if scored.has_references() {
        let bleu = mean(scored.scores().iter().filter_map(ScoreSet::bleu_percent));
        let _ = writeln!(out, "mean BLEU: {bleu:.2}");
    }
    for kind in FlagKind::ALL {
        let _ = writeln!(out, "{kind}: {}", flag_count(scored, kind));
    }
    out
}

fn shorten(text: &str, max: usize) -> String {
    if text.chars().count() <= max {
        text.to_owned()
    } else {
        let mut s: String = text.chars().take(max - 1).collect();
        s.push('…');
        s
    }
}

/// An aligned table of the records at `positions`, in that order.
pub fn top_table(scored: &ScoredDataset, positions: &[usize]) -> String {
    let with_bleu = scored.has_references();
    let mut header = vec!["#", "id", "conf%", "cdp%", "ap_out%", "ap_in%", "overlap%"];
    if with_bleu {
        header.push("bleu");
    }
    header.extend(["flags", "hypothesis"]);

    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
    for (rank, &position) in positions.iter().enumerate() {
        let (record, s) = scored.get(position).expect("position within dataset");
        let mut row = vec![
            (rank + 1).to_string(),
            record.id().to_owned(),
            format!("{:.2}", s.confidence_percent()),
            format!("{:.2}", s.cdp_percent()),
            format!("{:.2}", s.ap_out_percent()),
            format!("{:.2}", s.ap_in_percent()),
            format!("{:.2}", s.overlap_percent),
        ];
        if with_bleu {
            row.push(
                s.bleu_percent()
                    .map_or_else(String::new, |b| format!("{b:.2}")),
            );
        }
        let flags: Vec<&str> = s.flags.iter().map(|f| f.kind().as_str()).collect();
        row.push(if flags.is_empty() {
            "-".into()
        } else {
            flags.join(",")
        });
        row.push(shorten(&record.hyp_text(), 60));
        rows.push(row);
    }

    let columns = rows[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    // Numbers are right-aligned; id, flags and text are left-aligned.
    let left = |c: usize| c == 1 || c >= columns - 2;
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            if left(c) {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

type Metric = fn(&ScoreSet) -> Option<f64>;

pub fn compare_summary(
    a: &ScoredDataset,
    b: &ScoredDataset,
    pairs: &[ComparisonPair<'_>],
) -> String {
    let mut rows: Vec<(&str, Metric)> = vec![
        ("confidence%", |s| Some(s.confidence_percent())),
        ("cdp%", |s| Some(s.cdp_percent())),
        ("ap_out%", |s| Some(s.ap_out_percent())),
        ("ap_in%", |s| Some(s.ap_in_percent())),
        ("overlap%", |s| Some(s.overlap_percent)),
    ];
    if a.has_references() && b.has_references() {
        rows.push(("bleu", ScoreSet::bleu_percent));
    }
    let name_width = a
        .system_name()
        .chars()
        .count()
        .max(b.system_name().chars().count())
        .max(6);
    let mut out = String::new();
    let _ = writeln!(out, "pairs: {}", pairs.len());
    let _ = writeln!(
        out,
        "{:<12}  {:>w$}  {:>w$}",
        "mean",
        a.system_name(),
        b.system_name(),
        w = name_width
    );
    for (label, value) in &rows {
        let ma = mean(a.scores().iter().filter_map(value));
        let mb = mean(b.scores().iter().filter_map(value));
        let _ = writeln!(out, "{label:<12}  {ma:>w$.2}  {mb:>w$.2}", w = name_width);
    }
    let wins = pairs
        .iter()
        .filter(|p| p.scores_a.confidence > p.scores_b.confidence)
        .count();
    let _ = writeln!(
        out,
        "{} has higher confidence than {} on {wins} of {} pairs",
        a.system_name(),
        b.system_name(),
        pairs.len()
    );
    for kind in FlagKind::ALL {
        let _ = writeln!(
            out,
            "{kind}: {} / {}",
            flag_count(a, kind),
            flag_count(b, kind)
        );
    }
    out
}
