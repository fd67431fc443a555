//! Request helpers and schema checks for the HTTP API.

use std::collections::BTreeMap;
use std::fs;
use std::sync::Arc;

use axum::Router;
use axum::body::Body;
use axum::http::{Request, StatusCode, header};
use csindex_core::ingest::load_records;
use csindex_core::registry::Registry;
use csindex_core::selection::YearWindow;
use csindex_core::service::Snapshot;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use super::{config_dir, sample_xml, schema_dir};

pub fn snapshot_for(window: YearWindow) -> Snapshot {
    let registry = Arc::new(Registry::load_dir(&config_dir()).unwrap());
    let (records, _) = load_records(&sample_xml()).unwrap();
    Snapshot::from_parts(registry, &records, window).unwrap()
}

pub fn fixture_snapshot() -> Snapshot {
    snapshot_for(YearWindow::default())
}

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub etag: String,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).expect("body is JSON")
    }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    let resp = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let (status, content_type, etag) = {
        let header = |name| {
            resp.headers()
                .get(name)
                .map(|v: &axum::http::HeaderValue| v.to_str().unwrap().to_string())
                .unwrap_or_default()
        };
        (
            resp.status(),
            header(header::CONTENT_TYPE),
            header(header::ETAG),
        )
    };
    let body = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    Reply {
        status,
        content_type,
        etag,
        body,
    }
}

pub fn validator(schema: &str) -> jsonschema::Validator {
    let text = fs::read_to_string(schema_dir().join(schema)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::options()
        .should_validate_formats(true)
        .build(&schema)
        .unwrap_or_else(|e| panic!("{schema}: {e}"))
}

/// Every success-path URI on the fixture snapshot, with the schema it answers to.
pub fn endpoint_uris(snap: &Snapshot) -> Vec<(String, &'static str)> {
    let reg = snap.registry();
    let mut uris = vec![
        ("/areas".to_string(), "areas.json"),
        ("/meta".to_string(), "meta.json"),
    ];
    for a in &reg.areas {
        let id = &a.area_id;
        uris.push((format!("/areas/{id}/conferences"), "conferences.json"));
        uris.push((format!("/areas/{id}/departments"), "departments.json"));
        uris.push((format!("/areas/{id}/papers"), "papers.json"));
    }
    uris.push(("/areas/se/papers?offset=2&limit=3".into(), "papers.json"));
    for d in &reg.departments {
        uris.push((format!("/departments/{}", d.dept_id), "department.json"));
    }
    for r in &reg.researchers {
        uris.push((
            format!("/professors/{}/papers", r.researcher_id),
            "professor_papers.json",
        ));
    }
    uris
}

pub fn problem_uris() -> Vec<(&'static str, StatusCode)> {
    vec![
        ("/professors/unknown-id/papers", StatusCode::NOT_FOUND),
        ("/departments/nowhere", StatusCode::NOT_FOUND),
        ("/areas/zz/conferences", StatusCode::NOT_FOUND),
        ("/areas/zz/departments", StatusCode::NOT_FOUND),
        ("/areas/zz/papers", StatusCode::NOT_FOUND),
        ("/no/such/route", StatusCode::NOT_FOUND),
        ("/areas/se/papers?limit=0", StatusCode::BAD_REQUEST),
        ("/areas/se/papers?limit=abc", StatusCode::BAD_REQUEST),
        ("/areas/se/papers?offset=-1", StatusCode::BAD_REQUEST),
        ("/areas/se/papers?limit=1001", StatusCode::BAD_REQUEST),
    ]
}

/// Validates every endpoint; returns one message per failure.
pub async fn conformance_failures(app: &Router, snap: &Snapshot) -> Vec<String> {
    let mut validators: BTreeMap<&str, jsonschema::Validator> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut check = |uri: &str, schema: &'static str, reply: &Reply| -> Vec<String> {
        let v = validators
            .entry(schema)
            .or_insert_with(|| validator(schema));
        let body = reply.json();
        v.iter_errors(&body)
            .map(|err| format!("{uri}: {err} at {}", err.instance_path()))
            .collect()
    };
    for (uri, schema) in endpoint_uris(snap) {
        let reply = get(app, &uri).await;
        if reply.status != StatusCode::OK || reply.content_type != "application/json" {
            failures.push(format!("{uri}: {} {}", reply.status, reply.content_type));
            continue;
        }
        failures.extend(check(&uri, schema, &reply));
    }
    for (uri, status) in problem_uris() {
        let reply = get(app, uri).await;
        if reply.status != status || reply.content_type != "application/problem+json" {
            failures.push(format!("{uri}: {} {}", reply.status, reply.content_type));
            continue;
        }
        failures.extend(check(uri, "problem.json", &reply));
    }
    failures
}

/// Hammers `uris` while a writer alternates between `snaps`; returns the
/// number of responses checked and any that did not equal the body served
/// by the snapshot named in its ETag.
pub async fn swap_storm(
    snaps: Vec<Arc<Snapshot>>,
    uris: Vec<String>,
    rounds: usize,
) -> (usize, Vec<String>) {
    use csindex_core::service::{SnapshotStore, router};

    let mut expected: BTreeMap<(String, String), Vec<u8>> = BTreeMap::new();
    for s in &snaps {
        let app = router(SnapshotStore::new(s.clone()), None);
        for uri in &uris {
            let r = get(&app, uri).await;
            expected.insert((r.etag.trim_matches('"').to_string(), uri.clone()), r.body);
        }
    }

    let store = SnapshotStore::new(snaps[0].clone());
    let app = router(store.clone(), None);
    let stop = Arc::new(std::sync::atomic::AtomicBool::new(false));
    let writer = {
        let (stop, snaps) = (stop.clone(), snaps.clone());
        tokio::spawn(async move {
            let mut i = 0usize;
            while !stop.load(std::sync::atomic::Ordering::Relaxed) {
                i += 1;
                store.replace(snaps[i % snaps.len()].clone());
                tokio::task::yield_now().await;
            }
            i
        })
    };
    let expected = Arc::new(expected);
    let mut tasks = Vec::new();
    for worker in 0..8 {
        let (app, uris, expected) = (app.clone(), uris.clone(), expected.clone());
        tasks.push(tokio::spawn(async move {
            let mut bad = Vec::new();
            let mut seen = 0;
            for round in 0..rounds {
                let uri = &uris[(round + worker) % uris.len()];
                let r = get(&app, uri).await;
                seen += 1;
                let tag = r.etag.trim_matches('"').to_string();
                match expected.get(&(tag.clone(), uri.clone())) {
                    Some(body) if *body == r.body => {}
                    Some(_) => bad.push(format!("{uri}: body differs from snapshot {tag}")),
                    None => bad.push(format!("{uri}: unknown snapshot tag {tag:?}")),
                }
            }
            (seen, bad)
        }));
    }
    let mut seen = 0;
    let mut bad = Vec::new();
    for t in tasks {
        let (n, b) = t.await.unwrap();
        seen += n;
        bad.extend(b);
    }
    stop.store(true, std::sync::atomic::Ordering::Relaxed);
    let swaps = writer.await.unwrap();
    if swaps < 2 {
        bad.push(format!("only {swaps} swaps happened"));
    }
    (seen, bad)
}
