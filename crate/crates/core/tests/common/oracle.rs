//! Brute-force reference implementations used to check the library.
//!
//! Nothing here calls into `attnscope_core`; every quantity is recomputed
//! from plain nested vectors with direct loops.

#![allow(dead_code, clippy::needless_range_loop)]

/// Coverage deviation penalty by direct summation over columns.
pub fn cdp(rows: &[Vec<f64>]) -> f64 {
    let src_len = rows[0].len();
    let mut acc = 0.0;
    for i in 0..src_len {
        let mut coverage = 0.0;
        for row in rows {
            coverage += row[i];
        }
        acc += (1.0 + (1.0 - coverage) * (1.0 - coverage)).ln();
    }
    -acc / src_len as f64
}

fn plogp(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

pub fn ap_out(rows: &[Vec<f64>]) -> f64 {
    let src_len = rows[0].len();
    let mut acc = 0.0;
    for row in rows {
        let mut sum = 0.0;
        for w in row {
            sum += w;
        }
        if sum == 0.0 {
            continue;
        }
        let divisor = if (sum - 1.0).abs() > 1e-9 { sum } else { 1.0 };
        for w in row {
            acc += plogp(w / divisor);
        }
    }
    acc / src_len as f64
}

pub fn ap_in(rows: &[Vec<f64>]) -> f64 {
    let src_len = rows[0].len();
    let mut acc = 0.0;
    for i in 0..src_len {
        let mut sum = 0.0;
        for row in rows {
            sum += row[i];
        }
        if sum == 0.0 {
            continue;
        }
        for row in rows {
            acc += plogp(row[i] / sum);
        }
    }
    acc / src_len as f64
}

pub fn op(hyp_len: usize, s: f64) -> f64 {
    let length_factor = 0.8 + hyp_len as f64 / 100.0;
    let similarity_factor = 5.0 * s - 2.0;
    length_factor * similarity_factor * (0.7 + s) * (s.sin() / s.cos())
}

/// Longest common substring of `hyp` and `src` using a full DP table.
/// Returns `(hyp_start, src_start, len)`, smallest hyp start first, then
/// smallest src start.
pub fn longest_common_substring(hyp: &[char], src: &[char]) -> (usize, usize, usize) {
    let (n, m) = (hyp.len(), src.len());
    let mut table = vec![vec![0usize; m + 1]; n + 1];
    let mut best_len = 0;
    for h in 1..=n {
        for s in 1..=m {
            if hyp[h - 1] == src[s - 1] {
                table[h][s] = table[h - 1][s - 1] + 1;
                best_len = best_len.max(table[h][s]);
            }
        }
    }
    if best_len == 0 {
        return (0, 0, 0);
    }
    let mut best: Option<(usize, usize)> = None;
    for h in 1..=n {
        for s in 1..=m {
            if table[h][s] == best_len {
                let start = (h - best_len, s - best_len);
                if best.is_none_or(|b| start < b) {
                    best = Some(start);
                }
            }
        }
    }
    let (hs, ss) = best.unwrap();
    (hs, ss, best_len)
}

fn matched(hyp: &[char], src: &[char]) -> usize {
    let (hs, ss, len) = longest_common_substring(hyp, src);
    if len == 0 {
        return 0;
    }
    len + matched(&hyp[..hs], &src[..ss]) + matched(&hyp[hs + len..], &src[ss + len..])
}

pub fn fold(text: &str) -> Vec<char> {
    text.chars()
        .map(|c| c.to_lowercase().next().unwrap_or(c))
        .collect()
}

/// Ratcliff–Obershelp ratio of two texts.
pub fn ratio(src: &str, hyp: &str) -> f64 {
    let (src, hyp) = (fold(src), fold(hyp));
    if src.is_empty() && hyp.is_empty() {
        return 0.0;
    }
    2.0 * matched(&hyp, &src) as f64 / (src.len() + hyp.len()) as f64
}

fn count_occurrences(tokens: &[&str], gram: &[&str]) -> usize {
    let n = gram.len();
    if tokens.len() < n {
        return 0;
    }
    (0..=tokens.len() - n)
        .filter(|&k| tokens[k..k + n] == *gram)
        .count()
}

/// Sentence BLEU by explicit n-gram enumeration; `None` for empty input.
pub fn bleu(hyp: &[&str], reference: &[&str]) -> Option<f64> {
    if hyp.is_empty() || reference.is_empty() {
        return None;
    }
    let mut log_sum = 0.0;
    let mut orders = 0;
    for n in 1..=4 {
        if hyp.len() < n {
            break;
        }
        let total = hyp.len() - n + 1;
        let mut clipped = 0;
        // Count each distinct n-gram once, at its first occurrence.
        for k in 0..total {
            let gram = &hyp[k..k + n];
            let first = (0..k).all(|e| hyp[e..e + n] != *gram);
            if first {
                clipped += count_occurrences(hyp, gram).min(count_occurrences(reference, gram));
            }
        }
        let precision = if n == 1 {
            if clipped == 0 {
                return Some(0.0);
            }
            clipped as f64 / total as f64
        } else {
            (clipped as f64 + 1.0) / (total as f64 + 1.0)
        };
        log_sum += precision.ln();
        orders += 1;
    }
    let bp = if hyp.len() < reference.len() {
        (1.0 - reference.len() as f64 / hyp.len() as f64).exp()
    } else {
        1.0
    };
    Some(bp * (log_sum / orders as f64).exp())
}
