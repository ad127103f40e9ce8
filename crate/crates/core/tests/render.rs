mod common;

use attnscope_core::render::{
    render_comparison_svg, render_matrix_text, render_record_svg, RenderOptions, DRAW_THRESHOLD,
};
use attnscope_core::{pair_datasets, score_record, Dataset, ScoredDataset};
use common::{arb_dataset, arb_record, record};
use proptest::prelude::*;

/// `(data-index, text)` of every `<text>` element with the given class.
fn tokens_with_class(svg: &str, class: &str) -> Vec<(usize, String)> {
    let marker = format!(r#"<text class="{class}" data-index=""#);
    svg.match_indices(&marker)
        .map(|(at, _)| {
            let rest = &svg[at + marker.len()..];
            let index: usize = rest[..rest.find('"').unwrap()].parse().unwrap();
            let body = &rest[rest.find('>').unwrap() + 1..];
            (index, body[..body.find("</text>").unwrap()].to_owned())
        })
        .collect()
}

fn unescape(text: &str) -> String {
    text.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

fn assert_covers(svg: &str, class: &str, tokens: &[String]) {
    let found = tokens_with_class(svg, class);
    assert_eq!(found.len(), tokens.len(), "{class}");
    for (k, (index, text)) in found.iter().enumerate() {
        assert_eq!(*index, k);
        assert_eq!(unescape(text), tokens[k]);
    }
}

#[test]
fn identical_pair_renders_parallel_bundles() {
    let rec = record(
        "a",
        "the loss was",
        "zaudējums bija",
        vec![vec![0.9, 0.05, 0.05], vec![0.1, 0.1, 0.8]],
        None,
    );
    let s = ScoredDataset::score(Dataset::new("s", vec![rec]).unwrap()).unwrap();
    let pairs = pair_datasets(&s, &s).unwrap();
    let svg = render_comparison_svg(&pairs[0], ["A", "B"]);
    let lines_a = svg
        .split(r#"<g class="alignments-a""#)
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap()
        .matches("<line")
        .count();
    let lines_b = svg
        .split(r#"<g class="alignments-b""#)
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap()
        .matches("<line")
        .count();
    assert_eq!(lines_a, 4);
    assert_eq!(lines_a, lines_b);
    assert!(svg.contains("#ff7f0e") && svg.contains("#2ca02c"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn record_svg_is_deterministic_and_complete(rec in arb_record("r".into())) {
        let scores = score_record(&rec).unwrap();
        let svg = render_record_svg(&rec, &scores);
        prop_assert_eq!(&svg, &render_record_svg(&rec, &scores));
        assert_covers(&svg, "src-token", rec.src_tokens());
        assert_covers(&svg, "hyp-token", rec.hyp_tokens());
        let expected = rec.attention().as_slice().iter().filter(|w| **w > DRAW_THRESHOLD).count();
        prop_assert_eq!(svg.matches("<line ").count(), expected);
    }

    #[test]
    fn comparison_svg_is_deterministic_and_complete(ds in arb_dataset(4)) {
        let s = ScoredDataset::score(ds).unwrap();
        for pair in pair_datasets(&s, &s).unwrap() {
            let svg = render_comparison_svg(&pair, ["one", "two"]);
            prop_assert_eq!(&svg, &render_comparison_svg(&pair, ["one", "two"]));
            assert_covers(&svg, "src-token", pair.record_a.src_tokens());
            assert_covers(&svg, "hyp-a-token", pair.record_a.hyp_tokens());
            assert_covers(&svg, "hyp-b-token", pair.record_b.hyp_tokens());
        }
    }

    #[test]
    fn opacity_grows_with_weight(a in 0.06f64..1.0, b in 0.06f64..1.0) {
        let rec = record("r", "x y", "z", vec![vec![a, b]], None);
        let svg = render_record_svg(&rec, &score_record(&rec).unwrap());
        let opacities: Vec<f64> = svg
            .match_indices("stroke-opacity=\"")
            .map(|(at, m)| {
                let rest = &svg[at + m.len()..];
                rest[..rest.find('"').unwrap()].parse().unwrap()
            })
            .collect();
        prop_assert_eq!(opacities.len(), 2);
        if a < b {
            prop_assert!(opacities[0] <= opacities[1]);
        } else {
            prop_assert!(opacities[0] >= opacities[1]);
        }
    }

    #[test]
    fn text_grid_is_deterministic(rec in arb_record("r".into())) {
        let opts = RenderOptions::default();
        prop_assert_eq!(render_matrix_text(&rec, &opts), render_matrix_text(&rec, &opts));
        prop_assert_eq!(render_matrix_text(&rec, &opts).lines().filter(|l| !l.trim().is_empty()).count() >= rec.hyp_len(), true);
    }
}
