#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use chrono::{TimeZone, Utc};
use http_body_util::BodyExt;
use lcr_core::bots::{BotConfig, Clock, Engine};
use lcr_core::store::SignalStore;
use tower::ServiceExt;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

pub fn clock() -> Clock {
    Clock::Fixed(Utc.with_ymd_and_hms(2020, 10, 1, 12, 0, 0).unwrap())
}

pub fn store() -> SignalStore {
    let mut s = SignalStore::in_memory();
    s.ingest_claimreviews(fixture("claims.jsonl")).unwrap();
    s.ingest_precrawled(fixture("sentences.jsonl")).unwrap();
    s.ingest_sites(fixture("sites.jsonl")).unwrap();
    s
}

pub fn engine_with(store: SignalStore, config: BotConfig) -> Engine {
    Engine::builder(Arc::new(store)).config(config).clock(clock()).build().unwrap()
}

pub fn engine() -> Engine {
    engine_with(store(), BotConfig::default())
}

pub async fn call(app: &Router, method: &str, path: &str, body: &str) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(path)
        .header("content-type", "application/ld+json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}
