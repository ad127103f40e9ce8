//! Sentence-level BLEU against a single reference.
//!
//! Unigram precision is unsmoothed; higher orders use add-one smoothing on
//! both numerator and denominator. Orders the hypothesis is too short to
//! contain are left out of the geometric mean.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuScore {
    pub value: f64,
    /// Modified precision per order; `None` where the hypothesis has no
    /// n-grams of that order.
    pub precisions: [Option<f64>; MAX_ORDER],
    pub brevity_penalty: f64,
}

fn ngram_counts<T: AsRef<str>>(tokens: &[T], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    for window in tokens.windows(n) {
        let key: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

pub fn sentence_bleu<H, R>(hyp: &[H], reference: &[R]) -> Result<BleuScore>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    if hyp.is_empty() || reference.is_empty() {
        return Err(Error::EmptyBleuInput);
    }
    let mut precisions = [None; MAX_ORDER];
    for (k, slot) in precisions.iter_mut().enumerate() {
        let n = k + 1;
        if hyp.len() < n {
            continue;
        }
        let ref_counts = ngram_counts(reference, n);
        let hyp_counts = ngram_counts(hyp, n);
        let clipped: usize = hyp_counts
            .iter()
            .map(|(gram, count)| (*count).min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        let total = hyp.len() + 1 - n;
        *slot = Some(if n == 1 {
            clipped as f64 / total as f64
        } else {
            (clipped + 1) as f64 / (total + 1) as f64
        });
    }

    let brevity_penalty = if hyp.len() < reference.len() {
        (1.0 - reference.len() as f64 / hyp.len() as f64).exp()
    } else {
        1.0
    };

    let value = match precisions[0] {
        Some(p1) if p1 > 0.0 => {
            let logs: Vec<f64> = precisions.iter().flatten().map(|p| p.ln()).collect();
            brevity_penalty * (logs.iter().sum::<f64>() / logs.len() as f64).exp()
        }
        _ => 0.0,
    };
    Ok(BleuScore {
        value: value.min(1.0),
        precisions,
        brevity_penalty,
    })
}
