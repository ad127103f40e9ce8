#![allow(dead_code)]

pub mod oracle;

use attnscope_core::{AlignmentRecord, AttentionMatrix, Dataset};
use proptest::prelude::*;

pub fn toks(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

pub fn record(
    id: &str,
    src: &str,
    hyp: &str,
    rows: Vec<Vec<f64>>,
    reference: Option<&str>,
) -> AlignmentRecord {
    let matrix = AttentionMatrix::from_rows(rows).unwrap();
    AlignmentRecord::new(
        id,
        toks(src),
        toks(hyp),
        matrix,
        reference.map(str::to_owned),
    )
    .unwrap()
}

/// Rows with the given shape, each a normalized random distribution with
/// occasional exact zeros.
pub fn arb_rows(max_dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![4 => 0.0f64..1.0, 1 => Just(0.0)], cols),
            rows,
        )
        .prop_map(|mut rows| {
            for row in &mut rows {
                let sum: f64 = row.iter().sum();
                if sum > 0.0 {
                    row.iter_mut().for_each(|w| *w /= sum);
                }
            }
            rows
        })
    })
}

pub fn arb_token() -> impl Strategy<Value = String> {
    "[a-z]{1,6}|[A-Z][a-z]{0,5}|[0-9,.]{1,4}|[<>&\"'čšž]{1,3}"
}

pub fn arb_record(id: String) -> impl Strategy<Value = AlignmentRecord> {
    (arb_rows(8), prop::bool::ANY)
        .prop_flat_map(|(rows, with_ref)| {
            let (hyp, src) = (rows.len(), rows[0].len());
            (
                Just(rows),
                prop::collection::vec(arb_token(), src),
                prop::collection::vec(arb_token(), hyp),
                if with_ref {
                    prop::collection::vec(arb_token(), 1..6)
                        .prop_map(Some)
                        .boxed()
                } else {
                    Just(None).boxed()
                },
            )
        })
        .prop_map(move |(rows, src, hyp, reference)| {
            let matrix = AttentionMatrix::from_rows(rows).unwrap();
            AlignmentRecord::new(id.clone(), src, hyp, matrix, reference.map(|r| r.join(" ")))
                .unwrap()
        })
}

pub fn arb_dataset(max_len: usize) -> impl Strategy<Value = Dataset> {
    (1..=max_len)
        .prop_flat_map(|n| {
            (0..n)
                .map(|k| arb_record(format!("r{k}")))
                .collect::<Vec<_>>()
        })
        .prop_map(|records| Dataset::new("random system", records).unwrap())
}
