//! Read-only HTTP API over the current snapshot.
//!
//! Every handler loads the snapshot reference once and answers entirely from
//! it, so a concurrent re-index never produces a mixed response. The
//! snapshot fingerprint is returned in the `ETag` header.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use arc_swap::ArcSwap;
use axum::Router;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode, header};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use serde::Serialize;
use tokio::net::TcpListener;

use super::Snapshot;
use crate::classifier::ConferenceRow;
use crate::registry::InstitutionKind;
use crate::scoring::{PaperSummary, Score, TierCounts};
use crate::selection::YearWindow;

pub const DEFAULT_LIMIT: usize = 100;
pub const MAX_LIMIT: usize = 1000;

/// Holder of the current snapshot; cloning shares the same slot.
#[derive(Clone)]
pub struct SnapshotStore(Arc<ArcSwap<Snapshot>>);

impl SnapshotStore {
    pub fn new(snapshot: impl Into<Arc<Snapshot>>) -> Self {
        SnapshotStore(Arc::new(ArcSwap::new(snapshot.into())))
    }

    pub fn current(&self) -> Arc<Snapshot> {
        self.0.load_full()
    }

    /// Atomically replaces the served snapshot.
    pub fn replace(&self, snapshot: impl Into<Arc<Snapshot>>) {
        self.0.store(snapshot.into());
    }
}

/// RFC 9457 problem detail.
#[derive(Debug, Serialize)]
pub struct Problem {
    #[serde(rename = "type")]
    kind: &'static str,
    title: &'static str,
    status: u16,
    detail: String,
}

impl Problem {
    fn not_found(detail: String) -> Self {
        Problem {
            kind: "about:blank",
            title: "Not Found",
            status: 404,
            detail,
        }
    }

    fn bad_request(detail: String) -> Self {
        Problem {
            kind: "about:blank",
            title: "Bad Request",
            status: 400,
            detail,
        }
    }
}

fn reply<T: Serialize>(snapshot: &Snapshot, result: Result<T, Problem>) -> Response {
    let (status, body, content_type) = match result {
        Ok(body) => (
            StatusCode::OK,
            serde_json::to_vec(&body),
            "application/json",
        ),
        Err(problem) => (
            StatusCode::from_u16(problem.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR),
            serde_json::to_vec(&problem),
            "application/problem+json",
        ),
    };
    let body = body.expect("response bodies serialize");
    let mut resp = (status, body).into_response();
    let headers = resp.headers_mut();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static(content_type));
    if let Ok(tag) = HeaderValue::from_str(&format!("\"{}\"", snapshot.fingerprint())) {
        headers.insert(header::ETAG, tag);
    }
    resp
}

#[derive(Debug, Serialize)]
pub struct AreaEntry<'a> {
    pub area_id: &'a str,
    pub name: &'a str,
    pub venues: usize,
    pub total_papers: u64,
}

#[derive(Debug, Serialize)]
pub struct RankedDepartment<'a> {
    pub rank: usize,
    pub dept_id: &'a str,
    pub name: &'a str,
    pub counts: TierCounts,
    pub score: Score,
    pub professors: u64,
}

#[derive(Debug, Serialize)]
pub struct DepartmentRanking<'a> {
    pub area_id: &'a str,
    pub total_papers: u64,
    pub departments: Vec<RankedDepartment<'a>>,
}

#[derive(Debug, Serialize)]
pub struct Page<'a> {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<&'a PaperSummary>,
}

#[derive(Debug, Serialize)]
pub struct DepartmentArea<'a> {
    pub area_id: &'a str,
    pub rank: usize,
    pub counts: TierCounts,
    pub score: Score,
    pub professors: u64,
}

#[derive(Debug, Serialize)]
pub struct ProfessorRef<'a> {
    pub researcher_id: &'a str,
    pub canonical_name: &'a str,
}

#[derive(Debug, Serialize)]
pub struct DepartmentDetail<'a> {
    pub dept_id: &'a str,
    pub name: &'a str,
    pub institution_kind: InstitutionKind,
    pub professors: Vec<ProfessorRef<'a>>,
    pub areas: Vec<DepartmentArea<'a>>,
}

#[derive(Debug, Serialize)]
pub struct ProfessorPapers<'a> {
    pub researcher_id: &'a str,
    pub canonical_name: &'a str,
    pub dept_id: &'a str,
    pub department: &'a str,
    #[serde(flatten)]
    pub page: Page<'a>,
}

#[derive(Debug, Serialize)]
pub struct Meta<'a> {
    pub window: YearWindow,
    pub generated_at: String,
    pub registry_digest: &'a str,
    pub fingerprint: &'a str,
    pub areas: usize,
    pub venues: usize,
    pub papers: usize,
}

type QueryParams = Result<Query<HashMap<String, String>>, QueryRejection>;

fn paging(params: QueryParams) -> Result<(usize, usize), Problem> {
    let Query(params) = params.map_err(|e| Problem::bad_request(e.body_text()))?;
    let parse = |name: &str, default: usize| -> Result<usize, Problem> {
        match params.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Problem::bad_request(format!("{name} must be a non-negative integer, got {v:?}"))
            }),
        }
    };
    let offset = parse("offset", 0)?;
    let limit = parse("limit", DEFAULT_LIMIT)?;
    if !(1..=MAX_LIMIT).contains(&limit) {
        return Err(Problem::bad_request(format!(
            "limit must be between 1 and {MAX_LIMIT}, got {limit}"
        )));
    }
    Ok((offset, limit))
}

fn page<'a>(items: Vec<&'a PaperSummary>, offset: usize, limit: usize) -> Page<'a> {
    let total = items.len();
    Page {
        total,
        offset,
        limit,
        items: items.into_iter().skip(offset).take(limit).collect(),
    }
}

fn known_area<'a>(snap: &'a Snapshot, area_id: &str) -> Result<&'a str, Problem> {
    snap.registry()
        .area(area_id)
        .map(|a| a.area_id.as_str())
        .ok_or_else(|| Problem::not_found(format!("no area {area_id:?}")))
}

async fn areas(State(store): State<SnapshotStore>) -> Response {
    let snap = store.current();
    let reg = snap.registry();
    let body: Vec<AreaEntry<'_>> = reg
        .areas
        .iter()
        .map(|a| AreaEntry {
            area_id: &a.area_id,
            name: &a.name,
            venues: reg.venues_in(&a.area_id).count(),
            total_papers: snap.area_stats(&a.area_id).map_or(0, |s| s.total_papers),
        })
        .collect();
    reply(&snap, Ok(body))
}

async fn area_conferences(
    State(store): State<SnapshotStore>,
    Path(area_id): Path<String>,
) -> Response {
    let snap = store.current();
    let result = known_area(&snap, &area_id).map(|id| {
        snap.classification
            .rows_in(id)
            .collect::<Vec<&ConferenceRow>>()
    });
    reply(&snap, result)
}

async fn area_departments(
    State(store): State<SnapshotStore>,
    Path(area_id): Path<String>,
) -> Response {
    let snap = store.current();
    let result = known_area(&snap, &area_id).map(|id| {
        let stats = snap.area_stats(id).expect("every registry area has stats");
        DepartmentRanking {
            area_id: id,
            total_papers: stats.total_papers,
            departments: stats
                .department_scores
                .iter()
                .enumerate()
                .map(|(i, d)| RankedDepartment {
                    rank: i + 1,
                    dept_id: &d.dept_id,
                    name: snap
                        .registry()
                        .department(&d.dept_id)
                        .map_or("", |d| d.name.as_str()),
                    counts: d.counts,
                    score: d.score,
                    professors: stats.professor_counts.get(&d.dept_id).copied().unwrap_or(0),
                })
                .collect(),
        }
    });
    reply(&snap, result)
}

async fn area_papers(
    State(store): State<SnapshotStore>,
    Path(area_id): Path<String>,
    params: QueryParams,
) -> Response {
    let snap = store.current();
    let result = known_area(&snap, &area_id).and_then(|id| {
        let (offset, limit) = paging(params)?;
        Ok(page(snap.area_papers(id), offset, limit))
    });
    reply(&snap, result)
}

async fn department(State(store): State<SnapshotStore>, Path(dept_id): Path<String>) -> Response {
    let snap = store.current();
    let reg = snap.registry();
    let result = reg
        .department(&dept_id)
        .ok_or_else(|| Problem::not_found(format!("no department {dept_id:?}")))
        .map(|d| DepartmentDetail {
            dept_id: &d.dept_id,
            name: &d.name,
            institution_kind: d.institution_kind,
            professors: reg
                .researchers
                .iter()
                .filter(|r| r.dept_id == d.dept_id)
                .map(|r| ProfessorRef {
                    researcher_id: &r.researcher_id,
                    canonical_name: &r.canonical_name,
                })
                .collect(),
            areas: snap
                .areas
                .iter()
                .filter_map(|stats| {
                    let (i, score) = stats
                        .department_scores
                        .iter()
                        .enumerate()
                        .find(|(_, s)| s.dept_id == d.dept_id)?;
                    Some(DepartmentArea {
                        area_id: &stats.area_id,
                        rank: i + 1,
                        counts: score.counts,
                        score: score.score,
                        professors: stats.professor_counts.get(&d.dept_id).copied().unwrap_or(0),
                    })
                })
                .collect(),
        });
    reply(&snap, result)
}

async fn professor_papers(
    State(store): State<SnapshotStore>,
    Path(researcher_id): Path<String>,
    params: QueryParams,
) -> Response {
    let snap = store.current();
    let reg = snap.registry();
    let result = reg
        .researcher(&researcher_id)
        .ok_or_else(|| Problem::not_found(format!("no professor {researcher_id:?}")))
        .and_then(|r| {
            let (offset, limit) = paging(params)?;
            Ok(ProfessorPapers {
                researcher_id: &r.researcher_id,
                canonical_name: &r.canonical_name,
                dept_id: &r.dept_id,
                department: reg.department(&r.dept_id).map_or("", |d| d.name.as_str()),
                page: page(snap.researcher_papers(&r.researcher_id), offset, limit),
            })
        });
    reply(&snap, result)
}

async fn meta(State(store): State<SnapshotStore>) -> Response {
    let snap = store.current();
    let body = Meta {
        window: snap.window,
        generated_at: snap.generated_at_rfc3339(),
        registry_digest: &snap.registry_digest,
        fingerprint: snap.fingerprint(),
        areas: snap.registry().areas.len(),
        venues: snap.registry().venues.len(),
        papers: snap.papers.len(),
    };
    reply(&snap, Ok(body))
}

async fn not_found(State(store): State<SnapshotStore>, uri: axum::http::Uri) -> Response {
    let snap = store.current();
    reply::<()>(
        &snap,
        Err(Problem::not_found(format!("no route for {}", uri.path()))),
    )
}

/// The API routes. When `ui_dir` is given, its files are served under `/ui`.
pub fn router(store: SnapshotStore, ui_dir: Option<PathBuf>) -> Router {
    let mut app = Router::new()
        .route("/areas", get(areas))
        .route("/areas/{area_id}/conferences", get(area_conferences))
        .route("/areas/{area_id}/departments", get(area_departments))
        .route("/areas/{area_id}/papers", get(area_papers))
        .route("/departments/{dept_id}", get(department))
        .route("/professors/{researcher_id}/papers", get(professor_papers))
        .route("/meta", get(meta));
    if let Some(dir) = ui_dir {
        app = app.nest_service("/ui", tower_http::services::ServeDir::new(dir));
    }
    app.fallback(not_found).with_state(store)
}

/// Serves the API on an already-bound listener until the task is dropped.
pub async fn serve_on(
    listener: TcpListener,
    store: SnapshotStore,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    axum::serve(listener, router(store, ui_dir)).await
}

pub async fn serve(
    addr: SocketAddr,
    store: SnapshotStore,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    serve_on(listener, store, ui_dir).await
}
