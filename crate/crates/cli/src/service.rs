use std::collections::{HashMap, VecDeque};
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pruning_core::sft::PruningParams;
use serde::Deserialize;

use crate::api::{self, ApiError, CensusRequest, ClassifyQuery, SliceQuery};
use crate::path::{validate_path, PathDocument};

pub const META_HEADER: &str = "x-slice-meta";
pub const DEFAULT_CACHE_CAPACITY: usize = 128;

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self {
            ApiError::Malformed(_) => StatusCode::BAD_REQUEST,
            ApiError::Semantic(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let body = serde_json::json!({ "error": self.to_string() });
        (status, Json(body)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Payload {
    pub content_type: &'static str,
    pub body: Bytes,
    pub meta: Option<String>,
}

impl Payload {
    fn json(body: String) -> Self {
        Payload { content_type: "application/json", body: body.into(), meta: None }
    }
}

impl IntoResponse for &Payload {
    fn into_response(self) -> Response {
        let mut res = (StatusCode::OK, self.body.clone()).into_response();
        let headers = res.headers_mut();
        headers.insert(header::CONTENT_TYPE, HeaderValue::from_static(self.content_type));
        if let Some(meta) = self.meta.as_deref().and_then(|m| HeaderValue::from_str(m).ok()) {
            headers.insert(META_HEADER, meta);
        }
        res
    }
}

/// Bounded memo of successful payloads, evicting the oldest entry first.
pub struct Cache {
    capacity: usize,
    inner: Mutex<(HashMap<String, Arc<Payload>>, VecDeque<String>)>,
}

impl Cache {
    pub fn new(capacity: usize) -> Self {
        Cache { capacity, inner: Mutex::new((HashMap::new(), VecDeque::new())) }
    }

    pub fn get(&self, key: &str) -> Option<Arc<Payload>> {
        self.inner.lock().expect("cache lock").0.get(key).cloned()
    }

    /// Returns the stored value when another request got there first.
    pub fn insert_or_get(&self, key: String, value: Payload) -> Arc<Payload> {
        let mut guard = self.inner.lock().expect("cache lock");
        let (map, order) = &mut *guard;
        if let Some(existing) = map.get(&key) {
            return existing.clone();
        }
        let value = Arc::new(value);
        if self.capacity == 0 {
            return value;
        }
        while map.len() >= self.capacity {
            match order.pop_front() {
                Some(old) => {
                    map.remove(&old);
                }
                None => break,
            }
        }
        order.push_back(key.clone());
        map.insert(key, value.clone());
        value
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub struct ServiceConfig {
    pub static_dir: Option<PathBuf>,
    /// Threads available to a single request's computation.
    pub workers: usize,
    pub cache_capacity: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { static_dir: None, workers: 4, cache_capacity: DEFAULT_CACHE_CAPACITY }
    }
}

pub struct AppState {
    pub cache: Cache,
    pool: rayon::ThreadPool,
    static_dir: Option<PathBuf>,
}

type Shared = State<Arc<AppState>>;

pub fn router(cfg: ServiceConfig) -> Router {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .expect("worker pool");
    let state = Arc::new(AppState { cache: Cache::new(cfg.cache_capacity), pool, static_dir: cfg.static_dir });
    Router::new()
        .route("/api/classify", get(classify))
        .route("/api/sft", get(sft))
        .route("/api/slice", get(slice))
        .route("/api/census", post(census))
        .route("/api/path/validate", post(validate))
        .fallback(static_file)
        .with_state(state)
}

async fn compute<F>(state: Arc<AppState>, key: String, f: F) -> Response
where
    F: FnOnce() -> Result<Payload, ApiError> + Send + 'static,
{
    if let Some(hit) = state.cache.get(&key) {
        return hit.as_ref().into_response();
    }
    let worker = state.clone();
    match tokio::task::spawn_blocking(move || worker.pool.install(f)).await {
        Ok(Ok(payload)) => state.cache.insert_or_get(key, payload).as_ref().into_response(),
        Ok(Err(e)) => e.into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(v)| v).map_err(|e| ApiError::Malformed(e.body_text()))
}

fn body<T>(j: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    j.map(|Json(v)| v).map_err(|e| ApiError::Malformed(e.body_text()))
}

async fn classify(State(state): Shared, q: Result<Query<ClassifyQuery>, QueryRejection>) -> Response {
    let q = match query(q) {
        Ok(q) => q,
        Err(e) => return e.into_response(),
    };
    let key = format!("classify {:?} {:?}", q.a.to_bits(), q.b.to_bits());
    compute(state, key, move || api::classify_payload(q).map(|p| Payload::json(api::to_json(&p)))).await
}

#[derive(Debug, Deserialize)]
struct SftQuery {
    #[serde(rename = "N")]
    n_disk: usize,
    #[serde(rename = "M")]
    m_disk: usize,
    #[serde(rename = "N2")]
    n2: Option<usize>,
    #[serde(rename = "M2")]
    m2: Option<usize>,
    n: usize,
}

impl SftQuery {
    fn disks(&self) -> Result<Vec<PruningParams>, ApiError> {
        let mut disks = vec![PruningParams::new(self.n_disk, self.m_disk)];
        match (self.n2, self.m2) {
            (Some(n), Some(m)) => disks.push(PruningParams::new(n, m)),
            (None, None) => {}
            _ => return Err(ApiError::Malformed("N2 and M2 go together".into())),
        }
        Ok(disks)
    }
}

async fn sft(State(state): Shared, q: Result<Query<SftQuery>, QueryRejection>) -> Response {
    let disks = match query(q).and_then(|q| Ok((q.disks()?, q.n))) {
        Ok(v) => v,
        Err(e) => return e.into_response(),
    };
    let key = format!("sft {:?} {}", disks.0, disks.1);
    compute(state, key, move || {
        api::sft_payload(&disks.0, disks.1).map(|p| Payload::json(api::to_json(&p)))
    })
    .await
}

async fn slice(State(state): Shared, q: Result<Query<SliceQuery>, QueryRejection>) -> Response {
    let q = match query(q) {
        Ok(q) => q,
        Err(e) => return e.into_response(),
    };
    let key = format!(
        "slice {} {} {} {} {} {} {}",
        q.are.to_bits(),
        q.aim.to_bits(),
        q.b.to_bits(),
        q.res,
        q.radius.to_bits(),
        q.budget,
        q.depth
    );
    compute(state, key, move || {
        let img = api::slice_image(&q)?;
        Ok(Payload {
            content_type: "image/x-portable-graymap",
            body: img.to_pgm().into(),
            meta: Some(serde_json::to_string(&img.meta).expect("metadata serializes")),
        })
    })
    .await
}

async fn census(State(state): Shared, j: Result<Json<CensusRequest>, JsonRejection>) -> Response {
    let req = match body(j) {
        Ok(r) => r,
        Err(e) => return e.into_response(),
    };
    let key = format!("census {} {} {:?} {}", req.a.to_bits(), req.b.to_bits(), req.disks, req.n_max);
    compute(state, key, move || api::census_report(&req).map(|r| Payload::json(api::to_json(&r)))).await
}

async fn validate(State(state): Shared, j: Result<Json<PathDocument>, JsonRejection>) -> Response {
    let doc = match body(j) {
        Ok(d) => d,
        Err(e) => return e.into_response(),
    };
    let key = format!("path {}", serde_json::to_string(&doc).expect("document serializes"));
    compute(state, key, move || validate_path(&doc).map(|v| Payload::json(api::to_json(&v)))).await
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("wasm") => "application/wasm",
        _ => "application/octet-stream",
    }
}

async fn static_file(State(state): Shared, uri: Uri) -> Response {
    let Some(root) = state.static_dir.as_ref() else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let rel = uri.path().trim_start_matches('/');
    let rel = if rel.is_empty() { "index.html" } else { rel };
    let rel = Path::new(rel);
    if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
        return StatusCode::NOT_FOUND.into_response();
    }
    let full = root.join(rel);
    match tokio::fs::read(&full).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, content_type(&full))], bytes).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

pub async fn serve(port: u16, cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(cfg)).await
}
