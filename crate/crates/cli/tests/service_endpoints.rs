use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use pruning_cli::api::{self, ClassifyQuery};
use pruning_cli::commands::{run, Cli};
use pruning_cli::service::{router, Cache, Payload, ServiceConfig, META_HEADER};
use clap::Parser;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(ServiceConfig::default())
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>, Option<String>) {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let meta = res.headers().get(META_HEADER).map(|h| h.to_str().unwrap().to_string());
    let body = to_bytes(res.into_body(), usize::MAX).await.unwrap().to_vec();
    (status, body, meta)
}

async fn get(uri: &str) -> (StatusCode, Vec<u8>, Option<String>) {
    send(app(), Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(uri: &str, body: Value) -> (StatusCode, Vec<u8>) {
    let req = Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let (s, b, _) = send(app(), req).await;
    (s, b)
}

fn value(body: &[u8]) -> Value {
    serde_json::from_slice(body).unwrap()
}

#[tokio::test]
async fn classify_endpoint() {
    let (s, body, _) = get("/api/classify?a=10&b=1").await;
    assert_eq!(s, StatusCode::OK);
    let v = value(&body);
    assert_eq!(v["inDN"], true);
    assert_eq!(v["inHOV"], true);
    assert_eq!(get("/api/classify?a=10&b=0").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get("/api/classify?a=ten&b=1").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get("/api/classify?a=10").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sft_endpoint() {
    let (s, body, _) = get("/api/sft?N=0&M=2&n=5").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(value(&body)["points"], 22);
    assert_eq!(get("/api/sft?N=1&M=1&n=5").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get("/api/sft?N=0&M=2&n=99").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get("/api/sft?N=0&M=2&n=5&N2=1").await.0, StatusCode::BAD_REQUEST);
    let (s, body, _) = get("/api/sft?N=0&M=3&N2=1&M2=2&n=5").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(value(&body)["disks"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn slice_endpoint() {
    let (s, body, meta) = get("/api/slice?are=2.8187&aim=0.0119&b=0.4&res=32&radius=2").await;
    assert_eq!(s, StatusCode::OK);
    let text = String::from_utf8(body.clone()).unwrap();
    assert!(text.starts_with("P2\n# a=2.8187 0.0119 b=0.4"));
    let meta: Value = serde_json::from_str(&meta.unwrap()).unwrap();
    assert_eq!(meta["a"]["re"], 2.8187);
    assert_eq!(meta["resolution"], 32);
    let (_, again, _) = get("/api/slice?are=2.8187&aim=0.0119&b=0.4&res=32&radius=2").await;
    assert_eq!(body, again);
    assert_eq!(get("/api/slice?are=2&b=0.4&res=0").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get("/api/slice?are=2&b=0&res=8").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get("/api/slice?are=x&b=0.4").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn census_endpoint() {
    let (s, body) = post("/api/census", json!({"a": 2.25, "b": 0.25, "disks": [{"N": 0, "M": 2}], "n_max": 5})).await;
    assert_eq!(s, StatusCode::OK);
    let v = value(&body);
    assert_eq!(v["verdict"], "MATCH");
    assert_eq!(v["rows"][4]["predicted"], 22);
    let (s, body) = post("/api/census", json!({"a": 5.4, "b": 1, "disks": [{"N": 0, "M": 2}], "n_max": 6})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(value(&body)["verdict"], "MISMATCH");
    let (s, _) = post("/api/census", json!({"a": 5.4, "b": 1, "disks": [{"N": 1, "M": 0}], "n_max": 4})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post("/api/census", json!({"a": 5.4, "b": 1, "n_max": 11})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post("/api/census", json!({"a": "x", "b": 1, "n_max": 4})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let req = Request::post("/api/census")
        .header("content-type", "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    assert_eq!(send(app(), req).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn path_validation() {
    let doc = json!({"b": 0.4, "points": [{"re": 8.0, "im": 0.0}], "created": "2026-10-15T12:00:00Z"});
    let (s, body) = post("/api/path/validate", doc).await;
    assert_eq!(s, StatusCode::OK);
    let v = value(&body);
    assert_eq!(v["ok"], true);
    assert_eq!(v["start_in_dn"], true);
    assert!(v["points"][0]["non_escaping_fraction"].as_f64().unwrap() < 0.05);

    let doc = json!({"b": 0.4, "points": [
        {"re": 8.0, "im": 0.0}, {"re": 7.9, "im": 0.05}, {"re": 7.5, "im": 0.05}
    ], "created": "2026-10-15T12:00:00Z"});
    let v = value(&post("/api/path/validate", doc).await.1);
    assert_eq!(v["ok"], false);
    assert_eq!(v["segments"][0]["within_bound"], true);
    assert_eq!(v["segments"][1]["within_bound"], false);

    let doc = json!({"b": 0.4, "points": [{"re": 2.8187, "im": 0.0119}], "created": "now"});
    let v = value(&post("/api/path/validate", doc).await.1);
    assert_eq!(v["start_in_dn"], false);

    let empty = json!({"b": 0.4, "points": [], "created": "now"});
    assert_eq!(post("/api/path/validate", empty).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    let missing = json!({"b": 0.4, "points": [{"re": 1.0}], "created": "now"});
    assert_eq!(post("/api/path/validate", missing).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn static_files_and_traversal() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html></html>").unwrap();
    let cfg = ServiceConfig { static_dir: Some(dir.path().to_path_buf()), ..ServiceConfig::default() };
    let (s, body, _) = send(router(cfg), Request::get("/").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, b"<html></html>");
    let cfg = ServiceConfig { static_dir: Some(dir.path().to_path_buf()), ..ServiceConfig::default() };
    let (s, _, _) = send(router(cfg), Request::get("/../etc/passwd").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(get("/index.html").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn repeated_calls_are_identical() {
    let app = app();
    let mut bodies = Vec::new();
    for _ in 0..3 {
        let req = Request::get("/api/sft?N=2&M=2&n=8").body(Body::empty()).unwrap();
        bodies.push(send(app.clone(), req).await.1);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn cli_and_service_payloads_agree() {
    let mut out = Vec::new();
    let cli = Cli::parse_from(["pruning", "classify", "--a", "10", "--b", "1"]);
    run(cli, &mut out).unwrap();
    let direct = api::to_json(&api::classify_payload(ClassifyQuery { a: 10.0, b: 1.0 }).unwrap());
    assert_eq!(String::from_utf8(out).unwrap().trim_end(), direct);
    let rt = tokio::runtime::Runtime::new().unwrap();
    let (_, body, _) = rt.block_on(get("/api/classify?a=10&b=1"));
    assert_eq!(String::from_utf8(body).unwrap(), direct);

    let mut out = Vec::new();
    run(Cli::parse_from(["pruning", "sft", "--N", "0", "--M", "2", "--max-period", "5"]), &mut out).unwrap();
    let (_, body, _) = rt.block_on(get("/api/sft?N=0&M=2&n=5"));
    assert_eq!(String::from_utf8(out).unwrap().trim_end(), String::from_utf8(body).unwrap());
}

#[test]
fn cache_is_bounded_and_keeps_first_value() {
    let cache = Cache::new(2);
    let p = |s: &str| Payload { content_type: "text/plain", body: s.to_string().into(), meta: None };
    let first = cache.insert_or_get("k".into(), p("one"));
    let second = cache.insert_or_get("k".into(), p("two"));
    assert!(Arc::ptr_eq(&first, &second));
    cache.insert_or_get("l".into(), p("x"));
    cache.insert_or_get("m".into(), p("y"));
    assert_eq!(cache.len(), 2);
    assert!(cache.get("k").is_none());
    assert!(cache.get("m").is_some());
}
