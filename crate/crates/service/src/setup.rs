use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use lcr_core::bots::{BotConfig, Clock, Engine, Registry};
use lcr_core::nlp::{
    BaselineStance, HashingEncoder, NlpError, RemoteBackend, SentenceEncoder, SentenceIndex, StanceDetector,
};
use lcr_core::par::ExecMode;
use lcr_core::store::SignalStore;
use tracing::{info, warn};

use crate::{ServiceConfig, ServiceError};

/// Which NLP backend the engine runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendMode {
    /// No remote backend configured.
    Baseline,
    Remote,
    /// A remote backend is configured but unreachable; the baseline is used.
    BaselineFallback,
}

impl BackendMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendMode::Baseline => "baseline",
            BackendMode::Remote => "remote",
            BackendMode::BaselineFallback => "baseline-fallback",
        }
    }
}

/// What startup found, reported by `/health`.
#[derive(Debug, Clone, PartialEq)]
pub struct Startup {
    pub backend: BackendMode,
    pub backend_url: Option<String>,
    pub index_path: Option<PathBuf>,
    pub index_from_file: bool,
    /// Reasons the service runs degraded.
    pub degraded: Vec<String>,
}

impl Default for Startup {
    fn default() -> Self {
        Startup {
            backend: BackendMode::Baseline,
            backend_url: None,
            index_path: None,
            index_from_file: false,
            degraded: Vec::new(),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))
}

/// Open the store, registry and backends named by `cfg` and build the engine.
pub fn build_engine(cfg: &ServiceConfig, clock: Clock) -> Result<(Engine, Startup), ServiceError> {
    let store = match &cfg.store {
        Some(dir) => SignalStore::open(dir)?,
        None => SignalStore::in_memory(),
    };
    let registry = match &cfg.registry {
        Some(p) => Registry::from_toml(&read(p)?).map_err(|e| ServiceError::Config(format!("{}: {e}", p.display())))?,
        None => Registry::standard(),
    };
    let mut bot_config = match &cfg.bot_config {
        Some(p) => BotConfig::from_toml(&read(p)?).map_err(|e| ServiceError::Config(format!("{}: {e}", p.display())))?,
        None => BotConfig::default(),
    };
    if let Some(on) = cfg.caution {
        bot_config.caution.enabled = on;
    }

    let mut startup = Startup {
        backend_url: cfg.backend_url.clone(),
        index_path: cfg.index.clone(),
        ..Startup::default()
    };
    let (encoder, stance): (Arc<dyn SentenceEncoder>, Arc<dyn StanceDetector>) = match &cfg.backend_url {
        None => (Arc::new(HashingEncoder::new(ExecMode::Parallel)), Arc::new(BaselineStance)),
        Some(url) => match RemoteBackend::connect(url, cfg.request_timeout().min(Duration::from_secs(10))) {
            Ok(remote) => {
                info!(url, backend = remote.backend_id(), "remote backend connected");
                startup.backend = BackendMode::Remote;
                let remote = Arc::new(remote);
                (remote.clone(), remote)
            }
            Err(e) if bot_config.fallback_to_baseline => {
                warn!(url, "remote backend unavailable, using baseline: {e}");
                startup.backend = BackendMode::BaselineFallback;
                (Arc::new(HashingEncoder::new(ExecMode::Parallel)), Arc::new(BaselineStance))
            }
            Err(e) => return Err(ServiceError::Backend(e)),
        },
    };

    let loaded = match &cfg.index {
        Some(p) if p.exists() => match SentenceIndex::load(p, Some(encoder.backend_id())) {
            Ok(index) => Some(index),
            Err(NlpError::BackendMismatch { .. }) if startup.backend == BackendMode::BaselineFallback => None,
            Err(e) => return Err(ServiceError::Backend(e)),
        },
        Some(p) => {
            startup
                .degraded
                .push(format!("index file {} not found; index built from the store at startup", p.display()));
            None
        }
        None => None,
    };
    startup.index_from_file = loaded.is_some();
    let index = match loaded {
        Some(i) => i,
        None => SentenceIndex::build_from_store(encoder.as_ref(), &store)?,
    };

    let engine = Engine::builder(Arc::new(store))
        .registry(registry)
        .config(bot_config)
        .clock(clock)
        .backend(encoder, stance, Arc::new(index))
        .build()?;
    Ok((engine, startup))
}
