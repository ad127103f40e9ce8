//! Tab-separated line-record format.
//!
//! Each line holds one record:
//!
//! ```text
//! id \t src tokens \t hyp tokens \t matrix [\t reference]
//! ```
//!
//! Tokens are joined by single spaces, matrix rows by `;` and the weights of
//! a row by `,`. An empty id defaults to the 0-based line index. Blank lines
//! are skipped.

use std::collections::HashSet;

use super::{decode_utf8, format_float, parse_weight, DEFAULT_SYSTEM_NAME};
use crate::alignment::{AlignmentRecord, AttentionMatrix, Dataset};
use crate::error::{Error, Result};

pub fn parse_canonical(input: &[u8]) -> Result<Dataset> {
    let text = decode_utf8(input)?;
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (index, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_line(line, index)?;
        if !ids.insert(record.id().to_owned()) {
            return Err(Error::malformed(
                index + 1,
                format!("duplicate record id {:?}", record.id()),
            ));
        }
        records.push(record);
    }
    Dataset::new(DEFAULT_SYSTEM_NAME, records)
}

/// Parses the record on 0-based line `index`; errors carry 1-based numbers.
pub(crate) fn parse_line(line: &str, index: usize) -> Result<AlignmentRecord> {
    let lineno = index + 1;
    let fields: Vec<&str> = line.split('\t').collect();
    if !(4..=5).contains(&fields.len()) {
        return Err(Error::malformed(
            lineno,
            format!(
                "expected 4 or 5 tab-separated fields, found {}",
                fields.len()
            ),
        ));
    }
    let id = match fields[0].trim() {
        "" => index.to_string(),
        id => id.to_owned(),
    };
    let src = split_tokens(fields[1]);
    let hyp = split_tokens(fields[2]);
    let rows = parse_matrix(fields[3]).map_err(|reason| Error::malformed(lineno, reason))?;
    let matrix = AttentionMatrix::from_rows(rows)
        .map_err(|e| Error::malformed(lineno, format!("record {id}: {e}")))?;
    let reference = fields.get(4).map(|r| (*r).to_owned());
    AlignmentRecord::new(id, src, hyp, matrix, reference).map_err(|e| match e {
        Error::Dimension { id, reason } => Error::Dimension {
            id,
            reason: format!("{reason} (line {lineno})"),
        },
        other => Error::malformed(lineno, other.to_string()),
    })
}

fn split_tokens(field: &str) -> Vec<String> {
    field.split_whitespace().map(str::to_owned).collect()
}

fn parse_matrix(field: &str) -> std::result::Result<Vec<Vec<f64>>, String> {
    field
        .split(';')
        .enumerate()
        .map(|(j, row)| {
            row.split(',')
                .enumerate()
                .map(|(i, w)| {
                    parse_weight(w).map_err(|e| format!("matrix row {j}, column {i}: {e}"))
                })
                .collect()
        })
        .collect()
}

pub fn serialize_canonical(dataset: &Dataset) -> Vec<u8> {
    let mut out = String::new();
    for record in dataset {
        write_record(&mut out, record);
        out.push('\n');
    }
    out.into_bytes()
}

/// Appends the record's fields without a line terminator. The reference
/// field is written only when present.
pub(crate) fn write_record(out: &mut String, record: &AlignmentRecord) {
    out.push_str(record.id());
    out.push('\t');
    out.push_str(&record.src_tokens().join(" "));
    out.push('\t');
    out.push_str(&record.hyp_tokens().join(" "));
    out.push('\t');
    for (j, row) in record.attention().iter_rows().enumerate() {
        if j > 0 {
            out.push(';');
        }
        for (i, w) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_float(*w));
        }
    }
    if let Some(r) = record.ref_text() {
        out.push('\t');
        out.push_str(r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::arb_dataset;
    use proptest::prelude::*;

    #[test]
    fn minimal_record() {
        let ds = parse_canonical(b"\ta b\tx\t0.5,0.5\n").unwrap();
        assert_eq!(ds.len(), 1);
        let rec = &ds.records()[0];
        assert_eq!(rec.id(), "0");
        assert_eq!(rec.src_len(), 2);
        assert_eq!(rec.hyp_len(), 1);
        assert_eq!(rec.ref_text(), None);
    }

    #[test]
    fn default_ids_follow_line_index() {
        let ds = parse_canonical(b"\ta\tx\t1\n\n\tb\ty\t1\tref here\n").unwrap();
        let ids: Vec<_> = ds.iter().map(|r| r.id()).collect();
        assert_eq!(ids, ["0", "2"]);
        assert_eq!(ds.records()[1].ref_text(), Some("ref here"));
    }

    #[test]
    fn dimension_mismatch_names_record() {
        let err = parse_canonical(b"s1\ta b\tx\t0.5,0.5;0.5,0.5\n").unwrap_err();
        match err {
            Error::Dimension { id, reason } => {
                assert_eq!(id, "s1");
                assert!(reason.contains("line 1"), "{reason}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let cases: [(&[u8], usize); 5] = [
            (b"a\tb\tc\t1\nonly two\tfields\n", 2),
            (b"a\tb\tc\t1\nb\tb\tc\tx\n", 2),
            (b"a\tb\tc\t1\nb\tb\tc\t-1\n", 2),
            (b"a\tb\tc\t1\na\tb\tc\t1\n", 2),
            (b"a\tb\tc\t1\n\xff\n", 2),
        ];
        for (input, line) in cases {
            match parse_canonical(input) {
                Err(Error::Malformed { line: got, .. }) => assert_eq!(got, line),
                other => panic!("{:?}: {other:?}", String::from_utf8_lossy(input)),
            }
        }
    }

    #[test]
    fn ragged_matrix_is_malformed() {
        assert!(matches!(
            parse_canonical(b"a\tb c\tx y\t0.5,0.5;1\n"),
            Err(Error::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn empty_stream() {
        let err = parse_canonical(b"").unwrap_err();
        assert_eq!(err.to_string(), "empty dataset");
        assert!(matches!(
            parse_canonical(b"\n \n"),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn single_record_serializes_to_one_line() {
        let ds = parse_canonical(b"\ta b\tx\t0.5,0.5\n").unwrap();
        assert_eq!(serialize_canonical(&ds), b"0\ta b\tx\t0.5,0.5\n");
    }

    #[test]
    fn normalizes_spacing_and_floats() {
        let ds = parse_canonical(b"k\t a  b \tx\t0.50, 0.5000\r\n").unwrap();
        assert_eq!(serialize_canonical(&ds), b"k\ta b\tx\t0.5,0.5\n");
    }

    proptest! {
        #[test]
        fn round_trip(ds in arb_dataset(12)) {
            let bytes = serialize_canonical(&ds);
            let back = parse_canonical(&bytes).unwrap();
            prop_assert_eq!(back.records(), ds.records());
            prop_assert_eq!(serialize_canonical(&back), bytes);
        }
    }
}
