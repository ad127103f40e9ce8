//! Character-level similarity between a source sentence and its translation.
//!
//! Texts are compared case-insensitively, one folded character per input
//! character, so character offsets in a [`MatchSpan`] index straight into the
//! original texts. Equal-length matches are resolved leftmost in the
//! hypothesis first, then leftmost in the source.

use std::ops::Range;

/// The longest stretch of text shared by source and hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchSpan {
    /// Half-open character range into the source text.
    pub src_char_range: Range<usize>,
    /// Half-open character range into the hypothesis text.
    pub hyp_char_range: Range<usize>,
}

impl MatchSpan {
    pub fn len(&self) -> usize {
        self.hyp_char_range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyp_char_range.is_empty()
    }

    /// The matched characters as they appear in `hyp_text`.
    pub fn hyp_slice(&self, hyp_text: &str) -> String {
        char_slice(hyp_text, &self.hyp_char_range)
    }

    /// The matched characters as they appear in `src_text`.
    pub fn src_slice(&self, src_text: &str) -> String {
        char_slice(src_text, &self.src_char_range)
    }
}

fn char_slice(text: &str, range: &Range<usize>) -> String {
    text.chars().skip(range.start).take(range.len()).collect()
}

fn fold(text: &str) -> Vec<char> {
    text.chars()
        .map(|c| c.to_lowercase().next().unwrap_or(c))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    hyp: usize,
    src: usize,
    len: usize,
}

/// Longest common substring of `hyp` and `src`, preferring the smallest
/// hypothesis offset and then the smallest source offset among ties.
fn longest_block(hyp: &[char], src: &[char]) -> Block {
    let mut best = Block {
        hyp: 0,
        src: 0,
        len: 0,
    };
    // run[k + 1] = length of the common run ending at hyp[h - 1], src[k]
    let mut prev = vec![0usize; src.len() + 1];
    let mut cur = vec![0usize; src.len() + 1];
    for (h, hc) in hyp.iter().enumerate() {
        for (s, sc) in src.iter().enumerate() {
            cur[s + 1] = if hc == sc { prev[s] + 1 } else { 0 };
            let len = cur[s + 1];
            // Scanning by end position in the hypothesis means the first run
            // reaching a new maximum has the leftmost start in both texts.
            if len > best.len {
                best = Block {
                    hyp: h + 1 - len,
                    src: s + 1 - len,
                    len,
                };
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// Total characters matched by Ratcliff–Obershelp: take the longest common
/// block, then recurse into the unmatched text on either side of it.
fn matched_chars(hyp: &[char], src: &[char]) -> usize {
    let mut total = 0;
    let mut pending = vec![(0..hyp.len(), 0..src.len())];
    while let Some((h, s)) = pending.pop() {
        if h.is_empty() || s.is_empty() {
            continue;
        }
        let block = longest_block(&hyp[h.clone()], &src[s.clone()]);
        if block.len == 0 {
            continue;
        }
        total += block.len;
        let (h_at, s_at) = (h.start + block.hyp, s.start + block.src);
        pending.push((h.start..h_at, s.start..s_at));
        pending.push((h_at + block.len..h.end, s_at + block.len..s.end));
    }
    total
}

/// Ratcliff–Obershelp ratio `2M / (|src| + |hyp|)` in `[0, 1]`.
///
/// Two empty texts score 0.
pub fn similarity(src_text: &str, hyp_text: &str) -> f64 {
    let src = fold(src_text);
    let hyp = fold(hyp_text);
    let total = src.len() + hyp.len();
    if total == 0 {
        return 0.0;
    }
    2.0 * matched_chars(&hyp, &src) as f64 / total as f64
}

/// The leftmost longest common substring, used to underline copied text.
/// The span is empty when the texts share no character.
pub fn longest_match_span(src_text: &str, hyp_text: &str) -> MatchSpan {
    let block = longest_block(&fold(hyp_text), &fold(src_text));
    MatchSpan {
        src_char_range: block.src..block.src + block.len,
        hyp_char_range: block.hyp..block.hyp + block.len,
    }
}
