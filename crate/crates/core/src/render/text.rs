use super::intensity_scale;
use crate::alignment::AlignmentRecord;

const MAX_LABEL_CHARS: usize = 20;
const MAX_HEADER_CHARS: usize = 12;
const TRUNCATION_MARKER: char = '…';

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Total line width in columns.
    pub max_width: usize,
    /// Shades from lightest to darkest. Weights from 0 to the full-intensity
    /// weight are split into `shade_ramp.len()` equal buckets.
    pub shade_ramp: Vec<char>,
    /// Colour cells with ANSI grayscale escapes.
    pub color: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            max_width: 100,
            shade_ramp: " ░▒▓█".chars().collect(),
            color: false,
        }
    }
}

impl RenderOptions {
    pub fn with_ramp(mut self, ramp: &str) -> Self {
        self.shade_ramp = ramp.chars().collect();
        self
    }
}

fn shorten(token: &str, max: usize) -> String {
    if token.chars().count() <= max {
        token.to_owned()
    } else {
        let mut s: String = token.chars().take(max - 1).collect();
        s.push(TRUNCATION_MARKER);
        s
    }
}

fn shade_index(weight: f64, scale: f64, levels: usize) -> usize {
    let bucket = (weight / scale * levels as f64).floor();
    (bucket as usize).min(levels - 1)
}

/// Draws the matrix as a grid: hypothesis tokens label the rows, source
/// tokens are written vertically above the columns, and each cell is one
/// shade character. Columns that do not fit in `max_width` are dropped and
/// every line gets a trailing `…`.
pub fn render_matrix_text(record: &AlignmentRecord, options: &RenderOptions) -> String {
    let ramp: &[char] = if options.shade_ramp.is_empty() {
        &[' ', '█']
    } else {
        &options.shade_ramp
    };
    let matrix = record.attention();
    let scale = intensity_scale(matrix);

    let labels: Vec<String> = record
        .hyp_tokens()
        .iter()
        .map(|t| shorten(t, MAX_LABEL_CHARS))
        .collect();
    let label_width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);

    // Each column takes a cell plus a separating space.
    let available = options.max_width.saturating_sub(label_width + 1);
    let mut shown = (available / 2).max(1).min(matrix.cols());
    let truncated = shown < matrix.cols();
    if truncated && shown > 1 && shown * 2 + 1 > available {
        shown -= 1;
    }

    let headers: Vec<Vec<char>> = record.src_tokens()[..shown]
        .iter()
        .map(|t| shorten(t, MAX_HEADER_CHARS).chars().collect())
        .collect();
    let header_height = headers.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    for k in 0..header_height {
        let mut line = " ".repeat(label_width + 1);
        for (c, header) in headers.iter().enumerate() {
            if c > 0 {
                line.push(' ');
            }
            line.push(header.get(k).copied().unwrap_or(' '));
        }
        if truncated && k == 0 {
            line.push(' ');
            line.push(TRUNCATION_MARKER);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }

    for (label, row) in labels.iter().zip(matrix.iter_rows()) {
        let pad = label_width - label.chars().count();
        out.push_str(&" ".repeat(pad));
        out.push_str(label);
        out.push(' ');
        for (c, weight) in row[..shown].iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            let level = shade_index(*weight, scale, ramp.len());
            let cell = ramp[level];
            if options.color {
                let gray = 232 + level * 23 / (ramp.len() - 1).max(1);
                out.push_str(&format!("\x1b[38;5;{gray}m{cell}\x1b[0m"));
            } else {
                out.push(cell);
            }
        }
        if truncated {
            out.push(' ');
            out.push(TRUNCATION_MARKER);
        }
        out.push('\n');
    }
    out
}
