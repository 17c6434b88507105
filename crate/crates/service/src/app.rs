use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::extract::{Request, State};
use axum::http::{header, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lcr_core::bots::{BotError, Engine};
use lcr_core::model::jsonld::node_to_value;
use lcr_core::model::{parse_items, serialize_jsonld, ModelError, Node, CONTEXT_DOCUMENT};
use lcr_core::nlp::RemoteBackend;
use serde_json::{json, Value};
use tracing::{info, warn};

use crate::setup::{BackendMode, Startup};

pub const JSONLD: &str = "application/ld+json";

/// Shared, immutable request state.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    engine: Arc<Engine>,
    startup: Startup,
    timeout: Duration,
}

impl AppState {
    pub fn new(engine: Engine, startup: Startup, timeout: Duration) -> Self {
        AppState {
            inner: Arc::new(Inner {
                engine: Arc::new(engine),
                startup,
                timeout,
            }),
        }
    }

    /// Baseline engine with the default timeout.
    pub fn for_engine(engine: Engine) -> Self {
        Self::new(engine, Startup::default(), Duration::from_secs(30))
    }

    pub fn engine(&self) -> &Engine {
        &self.inner.engine
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/review", post(review))
        .route("/bots", get(bots))
        .route("/health", get(health))
        .layer(middleware::from_fn(log_requests))
        .with_state(state)
}

async fn log_requests(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let path = req.uri().path().to_string();
    let started = Instant::now();
    let response = next.run(req).await;
    info!(
        %method,
        path,
        status = response.status().as_u16(),
        latency_ms = started.elapsed().as_secs_f64() * 1e3,
        "request"
    );
    response
}

fn context() -> Value {
    let doc: Value = serde_json::from_str(CONTEXT_DOCUMENT).expect("shipped context is valid JSON");
    doc["@context"].clone()
}

fn jsonld(status: StatusCode, body: String) -> Response {
    Response::builder()
        .status(status)
        .header(header::CONTENT_TYPE, JSONLD)
        .body(Body::from(body))
        .expect("static response parts are valid")
}

fn problem(status: StatusCode, error: &str, detail: String, extra: Option<(&str, Value)>) -> Response {
    let mut body = json!({"error": error, "detail": detail});
    if let Some((k, v)) = extra {
        body[k] = v;
    }
    (status, Json(body)).into_response()
}

fn invalid_request(e: ModelError) -> Response {
    let violations: Vec<String> = match &e {
        ModelError::Invalid(vs) => vs.iter().map(ToString::to_string).collect(),
        other => vec![other.to_string()],
    };
    problem(
        StatusCode::BAD_REQUEST,
        "invalid request",
        e.to_string(),
        Some(("violations", json!(violations))),
    )
}

fn bot_failure(e: BotError) -> Response {
    match e {
        BotError::InvalidRequest(msg) => problem(
            StatusCode::BAD_REQUEST,
            "invalid request",
            msg.clone(),
            Some(("violations", json!([msg]))),
        ),
        BotError::Unsupported(_) | BotError::NotRegistered(_) => {
            problem(StatusCode::UNPROCESSABLE_ENTITY, "unsupported item", e.to_string(), None)
        }
        BotError::Backend { source, partial } => {
            let graph: Vec<Value> = partial.into_iter().map(|r| node_to_value(&Node::Review(r))).collect();
            let partial = json!({"@context": context(), "@graph": graph});
            problem(StatusCode::BAD_GATEWAY, "backend failure", source.to_string(), Some(("partial", partial)))
        }
        other => problem(StatusCode::INTERNAL_SERVER_ERROR, "internal error", other.to_string(), None),
    }
}

async fn review(State(state): State<AppState>, body: String) -> Response {
    let doc = match parse_items(&body) {
        Ok(d) => d,
        Err(e) => return invalid_request(e),
    };
    let engine = state.inner.engine.clone();
    let task = tokio::task::spawn_blocking(move || {
        let graph = engine.review_document(&doc)?;
        Ok::<_, BotError>(serialize_jsonld(&graph)?)
    });
    match tokio::time::timeout(state.inner.timeout, task).await {
        Ok(Ok(Ok(text))) => jsonld(StatusCode::OK, text),
        Ok(Ok(Err(e))) => bot_failure(e),
        Ok(Err(join)) => {
            warn!("review task failed: {join}");
            problem(StatusCode::INTERNAL_SERVER_ERROR, "internal error", join.to_string(), None)
        }
        Err(_) => problem(
            StatusCode::GATEWAY_TIMEOUT,
            "timeout",
            format!("review did not finish within {} s", state.inner.timeout.as_secs_f64()),
            None,
        ),
    }
}

async fn bots(State(state): State<AppState>) -> Response {
    let graph: Vec<Value> = state
        .engine()
        .registry()
        .descriptors()
        .map(|b| node_to_value(&Node::Bot(b.clone())))
        .collect();
    let doc = json!({"@context": context(), "@graph": graph});
    jsonld(StatusCode::OK, serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    let startup = &state.inner.startup;
    let engine = state.engine();
    let mut reasons = startup.degraded.clone();
    let mut backend = startup.backend;

    if let (BackendMode::Remote, Some(url)) = (backend, startup.backend_url.clone()) {
        let probe = tokio::task::spawn_blocking(move || RemoteBackend::connect(&url, Duration::from_secs(2))).await;
        if !matches!(probe, Ok(Ok(_))) {
            if engine.config().fallback_to_baseline {
                backend = BackendMode::BaselineFallback;
            } else {
                reasons.push("remote backend unreachable".into());
            }
        }
    }

    let status = if reasons.is_empty() { "ok" } else { "degraded" };
    Json(json!({
        "status": status,
        "reasons": reasons,
        "backend": backend.as_str(),
        "backend_id": engine.backend_id(),
        "index": {
            "path": startup.index_path,
            "from_file": startup.index_from_file,
            "entries": engine.index().len(),
        },
        "store": engine.store().stats(),
        "bots": engine.registry().len(),
    }))
}
