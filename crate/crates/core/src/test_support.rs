//! Proptest generators shared by the unit tests.

use proptest::prelude::*;

use crate::alignment::{AlignmentRecord, AttentionMatrix, Dataset};

pub fn arb_token() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9,;#:.%&<>\"'()/@\\-äöüčšžкирилл]{1,8}"
}

pub fn arb_weight() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => 0.0f64..1.0,
        1 => Just(0.0),
        1 => Just(1.0),
        1 => 0.0f64..20.0,
        1 => 1e-12f64..1e-6,
    ]
}

pub fn arb_record(id: String) -> impl Strategy<Value = AlignmentRecord> {
    (1usize..7, 1usize..7)
        .prop_flat_map(|(src, hyp)| {
            (
                prop::collection::vec(arb_token(), src),
                prop::collection::vec(arb_token(), hyp),
                prop::collection::vec(arb_weight(), src * hyp),
                prop::option::of("[ a-zA-Z.,äк]{0,20}"),
            )
        })
        .prop_map(move |(src, hyp, weights, reference)| {
            let matrix = AttentionMatrix::from_flat(hyp.len(), src.len(), weights).unwrap();
            AlignmentRecord::new(id.clone(), src, hyp, matrix, reference).unwrap()
        })
}

pub fn arb_dataset(max_len: usize) -> impl Strategy<Value = Dataset> {
    (1..=max_len)
        .prop_flat_map(|n| {
            (0..n)
                .map(|k| arb_record(format!("s{k}")))
                .collect::<Vec<_>>()
        })
        .prop_map(|records| Dataset::new("sys", records).unwrap())
}
