//! Read-only HTTP API over a scored attention index.
//!
//! The index is loaded once and never changes, so every response is a pure
//! function of the request. Sort orders are computed on first use and kept
//! for the life of the process.
//!
//! | route | |
//! |---|---|
//! | `GET /api/meta` | counts, system names, available sort keys |
//! | `GET /api/records?offset&limit&sort&dir&system` | one page of summaries |
//! | `GET /api/record/{id}?system` | tokens, matrix, scores, match span |
//! | `GET /api/compare/{id}` | both systems' records for one source |
//!
//! Anything else under `/` is served from the UI directory, or a built-in
//! placeholder page when none is configured.

mod error;
pub mod payload;

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use attnscope_core::index::INDEX_VERSION;
use attnscope_core::{Direction, Index, ScoredDataset, SortField, SortKey};
use axum::extract::{Path, Query, State};
use axum::http::header;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::{Json, Router};
use serde::Deserialize;
use tower_http::services::ServeDir;

pub use error::ApiError;
use payload::{Comparison, Detail, Meta, Page, SortOption, Summary, Systems, Thresholds};

pub const DEFAULT_PAGE_SIZE: usize = 50;
pub const MAX_PAGE_SIZE: usize = 500;

const PLACEHOLDER_PAGE: &str = include_str!("placeholder.html");

const KEY_COUNT: usize = SortField::ALL.len() * 2;

fn key_slot(key: SortKey) -> usize {
    let field = SortField::ALL
        .iter()
        .position(|f| *f == key.field)
        .unwrap_or(0);
    field * 2 + usize::from(key.direction == Direction::Descending)
}

struct System {
    scored: ScoredDataset,
    /// `None` inside a slot marks a key the dataset cannot be sorted by.
    orders: [OnceLock<Option<Vec<usize>>>; KEY_COUNT],
}

impl System {
    fn new(scored: ScoredDataset) -> Self {
        Self {
            scored,
            orders: std::array::from_fn(|_| OnceLock::new()),
        }
    }

    fn order(&self, key: SortKey) -> Option<&[usize]> {
        self.orders[key_slot(key)]
            .get_or_init(|| self.scored.sort_indices(key).ok())
            .as_deref()
    }

    fn lookup(&self, id: &str) -> Option<usize> {
        self.scored.dataset().position_of(id)
    }
}

/// Shared, immutable service state.
pub struct AppState {
    systems: Vec<System>,
}

impl AppState {
    pub fn new(index: Index) -> Self {
        let systems = match index {
            Index::Single(d) => vec![System::new(d)],
            Index::Paired(a, b) => vec![System::new(a), System::new(b)],
        };
        Self { systems }
    }

    pub fn is_comparison(&self) -> bool {
        self.systems.len() == 2
    }

    fn system(&self, name: Option<&str>) -> Result<&System, ApiError> {
        match name.unwrap_or("a") {
            "a" => Ok(&self.systems[0]),
            "b" if self.is_comparison() => Ok(&self.systems[1]),
            "b" => Err(ApiError::not_comparison_mode()),
            other => Err(ApiError::invalid_parameter(format!(
                "system must be a or b, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Directory with the built UI; `None` serves the placeholder page.
    pub ui_dir: Option<PathBuf>,
}

pub fn router(index: Index, config: &ServiceConfig) -> Router {
    let state = Arc::new(AppState::new(index));
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/records", get(records))
        .route("/api/record/{id}", get(record))
        .route("/api/compare/{id}", get(compare))
        .route("/api/{*rest}", get(unknown_endpoint))
        .with_state(state);
    match &config.ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    }
}

/// Serves `router` on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    router: Router,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router)
        .with_graceful_shutdown(shutdown)
        .await
}

async fn placeholder() -> impl IntoResponse {
    (
        [(header::CACHE_CONTROL, "no-cache")],
        Html(PLACEHOLDER_PAGE),
    )
}

async fn unknown_endpoint(Path(rest): Path<String>) -> ApiError {
    ApiError::not_found(format!("no endpoint /api/{rest}"))
}

async fn meta(State(state): State<Arc<AppState>>) -> Json<Meta> {
    let datasets: Vec<&ScoredDataset> = state.systems.iter().map(|s| &s.scored).collect();
    let has_references = datasets.iter().all(|d| d.has_references());
    let thresholds = *datasets[0].thresholds();
    Json(Meta {
        count: datasets[0].len(),
        systems: datasets
            .iter()
            .map(|d| d.system_name().to_owned())
            .collect(),
        has_references,
        comparison: state.is_comparison(),
        format_version: INDEX_VERSION,
        max_page_size: MAX_PAGE_SIZE,
        sorts: SortField::ALL
            .iter()
            .map(|f| SortOption {
                key: f.as_str(),
                available: *f != SortField::Bleu || has_references,
            })
            .collect(),
        thresholds: Thresholds {
            low_attention_percent: thresholds.low_attention_percent,
            overlap_percent: thresholds.overlap_percent,
            long_sentence_tokens: thresholds.long_sentence_tokens,
            low_bleu_points: thresholds.low_bleu_points,
            normal_attention_percent: thresholds.normal_attention_percent,
        },
    })
}

#[derive(Debug, Deserialize)]
struct PageQuery {
    offset: Option<String>,
    limit: Option<String>,
    sort: Option<String>,
    dir: Option<String>,
    system: Option<String>,
}

fn parse_count(name: &str, value: Option<&str>, default: usize) -> Result<usize, ApiError> {
    match value {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| {
            ApiError::invalid_parameter(format!("{name} must be a non-negative integer, got {v:?}"))
        }),
    }
}

async fn records(
    State(state): State<Arc<AppState>>,
    Query(q): Query<PageQuery>,
) -> Result<Json<Page>, ApiError> {
    let system = state.system(q.system.as_deref())?;
    let offset = parse_count("offset", q.offset.as_deref(), 0)?;
    let limit = parse_count("limit", q.limit.as_deref(), DEFAULT_PAGE_SIZE)?;
    if !(1..=MAX_PAGE_SIZE).contains(&limit) {
        return Err(ApiError::invalid_parameter(format!(
            "limit must be between 1 and {MAX_PAGE_SIZE}, got {limit}"
        )));
    }
    let field: SortField = q
        .sort
        .as_deref()
        .unwrap_or("confidence")
        .parse()
        .map_err(|_| {
            ApiError::invalid_parameter(format!(
                "unknown sort key {:?}",
                q.sort.unwrap_or_default()
            ))
        })?;
    let direction: Direction = q.dir.as_deref().unwrap_or("asc").parse().map_err(|_| {
        ApiError::invalid_parameter(format!(
            "dir must be asc or desc, got {:?}",
            q.dir.unwrap_or_default()
        ))
    })?;
    let key = SortKey::new(field, direction);
    let order = system.order(key).ok_or_else(ApiError::bleu_unavailable)?;

    let scored = &system.scored;
    let start = offset.min(order.len());
    let end = offset.saturating_add(limit).min(order.len());
    let records = order[start..end]
        .iter()
        .map(|&position| {
            let (record, scores) = scored.get(position).expect("sort order is a permutation");
            Summary::new(position, record, scores)
        })
        .collect();
    Ok(Json(Page {
        system: scored.system_name().to_owned(),
        sort: field.as_str(),
        dir: direction.as_str(),
        offset,
        limit,
        total: scored.len(),
        records,
    }))
}

#[derive(Debug, Deserialize)]
struct SystemQuery {
    system: Option<String>,
}

fn detail(scored: &ScoredDataset, position: usize) -> Detail {
    let (record, scores) = scored.get(position).expect("position from lookup");
    Detail::new(position, record, scores)
}

async fn record(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<SystemQuery>,
) -> Result<Json<Detail>, ApiError> {
    let system = state.system(q.system.as_deref())?;
    let position = system
        .lookup(&id)
        .ok_or_else(|| ApiError::not_found(format!("no record with id {id:?}")))?;
    Ok(Json(detail(&system.scored, position)))
}

/// Looks `id` up among system A's ids first, then system B's; the pair is
/// the two records at that position.
async fn compare(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Comparison>, ApiError> {
    let [a, b] = state.systems.as_slice() else {
        return Err(ApiError::not_comparison_mode());
    };
    let position = a
        .lookup(&id)
        .or_else(|| b.lookup(&id))
        .ok_or_else(|| ApiError::not_found(format!("no record with id {id:?}")))?;
    Ok(Json(Comparison {
        position,
        source_id: a.scored.dataset().records()[position].id().to_owned(),
        systems: Systems {
            a: a.scored.system_name().to_owned(),
            b: b.scored.system_name().to_owned(),
        },
        a: detail(&a.scored, position),
        b: detail(&b.scored, position),
    }))
}
