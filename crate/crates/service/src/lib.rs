//! HTTP service exposing the credibility-review bots.
//!
//! * `POST /review` takes a JSON-LD data item (or a `@graph` of items) and
//!   returns the review graph as JSON-LD.
//! * `GET /bots` lists the registered bots and their dependencies.
//! * `GET /health` reports store counts, the index and the backend in use.

mod app;
mod config;
mod setup;

use lcr_core::bots::{BotError, Clock};
use lcr_core::nlp::NlpError;
use lcr_core::store::StoreError;
use thiserror::Error;
use tracing::info;

pub use app::{router, AppState, JSONLD};
pub use config::ServiceConfig;
pub use setup::{build_engine, BackendMode, Startup};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Backend(#[from] NlpError),
    #[error(transparent)]
    Bot(#[from] BotError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Build the engine from `cfg` and serve until interrupted.
pub async fn serve(cfg: ServiceConfig) -> Result<(), ServiceError> {
    let built = cfg.clone();
    let (engine, startup) = tokio::task::spawn_blocking(move || build_engine(&built, Clock::System))
        .await
        .map_err(|e| ServiceError::Config(format!("startup task failed: {e}")))??;
    let state = AppState::new(engine, startup, cfg.request_timeout());
    let listener = tokio::net::TcpListener::bind(&cfg.bind).await?;
    info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
