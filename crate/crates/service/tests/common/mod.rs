#![allow(dead_code)]

use attnscope_core::{AlignmentRecord, AttentionMatrix, Dataset, Index, ScoredDataset};
use attnscope_service::{router, ServiceConfig};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use tower::ServiceExt;

const VOCAB: &[&str] = &[
    "the", "cat", "sat", "on", "mat", "loss", "was", "large", "kaķis", "sēdēja", "uz", "paklāja",
    "0,9", "mg/ml", "(", ")", "Haus", "groß", "ist", "nicht",
];

/// Between 1 and 14 random tokens.
fn sentence(rng: &mut StdRng) -> Vec<String> {
    let len = rng.gen_range(1..15);
    (0..len)
        .map(|_| VOCAB.choose(rng).unwrap().to_string())
        .collect()
}

fn matrix(rng: &mut StdRng, rows: usize, cols: usize) -> AttentionMatrix {
    let rows = (0..rows)
        .map(|_| {
            let mut row: Vec<f64> = (0..cols)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0.0
                    } else {
                        rng.gen::<f64>()
                    }
                })
                .collect();
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                row.iter_mut().for_each(|w| *w /= sum);
            }
            row
        })
        .collect();
    AttentionMatrix::from_rows(rows).unwrap()
}

/// `n` random records; roughly a third copy their source, and every tenth
/// repeats its predecessor so that sorts see ties.
pub fn random_dataset(name: &str, n: usize, seed: u64, with_refs: bool) -> ScoredDataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut records: Vec<AlignmentRecord> = Vec::with_capacity(n);
    for k in 0..n {
        let id = format!("s{k:04}");
        if k % 10 == 9 {
            let prev = &records[k - 1];
            let copy = AlignmentRecord::new(
                id,
                prev.src_tokens().to_vec(),
                prev.hyp_tokens().to_vec(),
                prev.attention().clone(),
                prev.ref_text().map(str::to_owned),
            )
            .unwrap();
            records.push(copy);
            continue;
        }
        let src = sentence(&mut rng);
        let hyp = if rng.gen_bool(0.33) {
            src.clone()
        } else {
            sentence(&mut rng)
        };
        let reference = with_refs.then(|| sentence(&mut rng).join(" "));
        let m = matrix(&mut rng, hyp.len(), src.len());
        records.push(AlignmentRecord::new(id, src, hyp, m, reference).unwrap());
    }
    ScoredDataset::score(Dataset::new(name, records).unwrap()).unwrap()
}

/// `base` with every hypothesis replaced, keeping sources and ids.
pub fn second_system(base: &ScoredDataset, seed: u64) -> ScoredDataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let records = base
        .dataset()
        .iter()
        .map(|r| {
            let hyp = sentence(&mut rng);
            let m = matrix(&mut rng, hyp.len(), r.src_len());
            AlignmentRecord::new(
                r.id(),
                r.src_tokens().to_vec(),
                hyp,
                m,
                r.ref_text().map(str::to_owned),
            )
            .unwrap()
        })
        .collect();
    ScoredDataset::score(Dataset::new("system b", records).unwrap()).unwrap()
}

pub fn app(index: Index) -> Router {
    router(index, &ServiceConfig::default())
}

pub async fn get(app: &Router, uri: &str) -> (StatusCode, Vec<u8>) {
    let response = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = response.status();
    let body = response
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, body)
}

pub async fn get_json(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (status, body) = get(app, uri).await;
    let value = serde_json::from_slice(&body)
        .unwrap_or_else(|e| panic!("{uri}: {e}: {}", String::from_utf8_lossy(&body)));
    (status, value)
}

/// Fetches every page of `/api/records` under one key and returns the ids in
/// the order served.
pub async fn all_pages(
    app: &Router,
    sort: &str,
    dir: &str,
    limit: usize,
    system: &str,
) -> Vec<String> {
    let mut ids = Vec::new();
    let mut offset = 0;
    loop {
        let uri = format!(
            "/api/records?offset={offset}&limit={limit}&sort={sort}&dir={dir}&system={system}"
        );
        let (status, page) = get_json(app, &uri).await;
        assert_eq!(status, StatusCode::OK, "{uri}: {page}");
        let records = page["records"].as_array().unwrap();
        if records.is_empty() {
            assert!(offset >= page["total"].as_u64().unwrap() as usize);
            return ids;
        }
        ids.extend(records.iter().map(|r| r["id"].as_str().unwrap().to_owned()));
        offset += limit;
    }
}
