//! SVG 1.1 output built from text, line and group elements only.

use std::fmt::Write as _;

use super::intensity_scale;
use crate::alignment::AlignmentRecord;
use crate::index::ComparisonPair;
use crate::metrics::ScoreSet;

/// Alignment lines are drawn only for weights strictly above this.
pub const DRAW_THRESHOLD: f64 = 0.05;

pub const COLOR_A: &str = "#ff7f0e";
pub const COLOR_B: &str = "#2ca02c";
const COLOR_SINGLE: &str = "#1f4e9c";

const MARGIN: f64 = 20.0;
const CHAR_WIDTH: f64 = 8.4;
const TOKEN_GAP: f64 = 14.0;
const FONT_SIZE: u32 = 14;
const ROW_GAP: f64 = 150.0;
const PANEL_LINE: f64 = 18.0;
const PANEL_WIDTH: f64 = 240.0;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Horizontal centres of a row of tokens, plus the row's total width.
fn layout(tokens: &[String]) -> (Vec<f64>, f64) {
    let mut x = MARGIN;
    let mut centres = Vec::with_capacity(tokens.len());
    for token in tokens {
        let width = token.chars().count() as f64 * CHAR_WIDTH;
        centres.push(x + width / 2.0);
        x += width + TOKEN_GAP;
    }
    (centres, x - TOKEN_GAP + MARGIN)
}

fn token_row(
    out: &mut String,
    class: &str,
    tokens: &[String],
    centres: &[f64],
    y: f64,
    fill: &str,
) {
    let _ = writeln!(out, r#"<g class="{class}s" fill="{fill}">"#);
    for (k, (token, x)) in tokens.iter().zip(centres).enumerate() {
        let _ = writeln!(
            out,
            r#"<text class="{class}" data-index="{k}" x="{x:.1}" y="{y:.1}" text-anchor="middle">{}</text>"#,
            escape(token)
        );
    }
    out.push_str("</g>\n");
}

/// Lines from source tokens down to hypothesis tokens, one per weight above
/// [`DRAW_THRESHOLD`]. `rows` holds the two baselines, source first.
fn alignment_lines(
    out: &mut String,
    class: &str,
    record: &AlignmentRecord,
    src_x: &[f64],
    hyp_x: &[f64],
    (y_src, y_hyp): (f64, f64),
    color: &str,
) {
    let matrix = record.attention();
    let scale = intensity_scale(matrix);
    let _ = writeln!(
        out,
        r#"<g class="{class}" stroke="{color}" stroke-width="2">"#
    );
    for (j, row) in matrix.iter_rows().enumerate() {
        for (i, weight) in row.iter().enumerate() {
            if *weight > DRAW_THRESHOLD {
                let opacity = (weight / scale).min(1.0);
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke-opacity="{opacity:.4}"/>"#,
                    src_x[i],
                    y_src + 6.0,
                    hyp_x[j],
                    y_hyp - FONT_SIZE as f64,
                );
            }
        }
    }
    out.push_str("</g>\n");
}

fn score_lines(scores: &ScoreSet) -> Vec<String> {
    let mut lines = vec![
        format!("Confidence: {:.2}%", scores.confidence_percent()),
        format!("CDP: {:.2}%", scores.cdp_percent()),
        format!("APout: {:.2}%", scores.ap_out_percent()),
        format!("APin: {:.2}%", scores.ap_in_percent()),
        format!("Overlap: {:.2}%", scores.overlap_percent),
    ];
    if let Some(bleu) = scores.bleu_percent() {
        lines.push(format!("BLEU: {bleu:.2}"));
    }
    lines
}

fn score_panel(out: &mut String, title: &str, scores: &ScoreSet, x: f64, y: f64, fill: &str) {
    let _ = writeln!(out, r#"<g class="scores" fill="{fill}">"#);
    let _ = writeln!(
        out,
        r#"<text x="{x:.1}" y="{y:.1}" font-weight="bold">{}</text>"#,
        escape(title)
    );
    for (k, line) in score_lines(scores).iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}">{}</text>"#,
            y + PANEL_LINE * (k + 1) as f64,
            escape(line)
        );
    }
    out.push_str("</g>\n");
}

fn open_document(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="monospace" font-size="{FONT_SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// One record: source tokens on top, hypothesis tokens below, alignment
/// lines between them and the score panel underneath.
pub fn render_record_svg(record: &AlignmentRecord, scores: &ScoreSet) -> String {
    let (src_x, src_width) = layout(record.src_tokens());
    let (hyp_x, hyp_width) = layout(record.hyp_tokens());
    let y_src = MARGIN + FONT_SIZE as f64;
    let y_hyp = y_src + ROW_GAP;
    let panel_y = y_hyp + 40.0;
    let panel_rows = score_lines(scores).len() + 1;
    let width = src_width.max(hyp_width).max(PANEL_WIDTH + 2.0 * MARGIN);
    let height = panel_y + PANEL_LINE * panel_rows as f64 + MARGIN;

    let mut out = String::new();
    open_document(&mut out, width, height);
    alignment_lines(
        &mut out,
        "alignments",
        record,
        &src_x,
        &hyp_x,
        (y_src, y_hyp),
        COLOR_SINGLE,
    );
    token_row(
        &mut out,
        "src-token",
        record.src_tokens(),
        &src_x,
        y_src,
        "black",
    );
    token_row(
        &mut out,
        "hyp-token",
        record.hyp_tokens(),
        &hyp_x,
        y_hyp,
        "black",
    );
    score_panel(&mut out, "Scores", scores, MARGIN, panel_y, "black");
    out.push_str("</svg>\n");
    out
}

/// Two systems' translations of one source: source on top, system A's
/// hypothesis in orange and system B's in green beneath it, each with its
/// own alignment lines and score panel. `labels` name the two systems.
pub fn render_comparison_svg(pair: &ComparisonPair<'_>, labels: [&str; 2]) -> String {
    let src = pair.record_a.src_tokens();
    let (src_x, src_width) = layout(src);
    let (a_x, a_width) = layout(pair.record_a.hyp_tokens());
    let (b_x, b_width) = layout(pair.record_b.hyp_tokens());
    let y_src = MARGIN + FONT_SIZE as f64;
    let y_a = y_src + ROW_GAP;
    let y_b = y_a + ROW_GAP;
    let panel_y = y_b + 40.0;
    let panel_rows = score_lines(pair.scores_a)
        .len()
        .max(score_lines(pair.scores_b).len())
        + 1;
    let width = src_width
        .max(a_width)
        .max(b_width)
        .max(2.0 * PANEL_WIDTH + 2.0 * MARGIN);
    let height = panel_y + PANEL_LINE * panel_rows as f64 + MARGIN;

    let mut out = String::new();
    open_document(&mut out, width, height);
    alignment_lines(
        &mut out,
        "alignments-a",
        pair.record_a,
        &src_x,
        &a_x,
        (y_src, y_a),
        COLOR_A,
    );
    alignment_lines(
        &mut out,
        "alignments-b",
        pair.record_b,
        &src_x,
        &b_x,
        (y_src, y_b),
        COLOR_B,
    );
    token_row(&mut out, "src-token", src, &src_x, y_src, "black");
    token_row(
        &mut out,
        "hyp-a-token",
        pair.record_a.hyp_tokens(),
        &a_x,
        y_a,
        COLOR_A,
    );
    token_row(
        &mut out,
        "hyp-b-token",
        pair.record_b.hyp_tokens(),
        &b_x,
        y_b,
        COLOR_B,
    );
    score_panel(&mut out, labels[0], pair.scores_a, MARGIN, panel_y, COLOR_A);
    score_panel(
        &mut out,
        labels[1],
        pair.scores_b,
        MARGIN + PANEL_WIDTH,
        panel_y,
        COLOR_B,
    );
    out.push_str("</svg>\n");
    out
}
