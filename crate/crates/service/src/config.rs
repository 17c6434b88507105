use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use crate::ServiceError;

/// Service settings, read from TOML and then overridden by environment
/// variables:
///
/// | variable | field |
/// |----------|-------|
/// | `LCR_BIND` | `bind` |
/// | `LCR_STORE` | `store` |
/// | `LCR_INDEX` | `index` |
/// | `LCR_BACKEND_URL` | `backend_url` |
/// | `LCR_REGISTRY` | `registry` |
/// | `LCR_BOT_CONFIG` | `bot_config` |
/// | `LCR_REQUEST_TIMEOUT_SECS` | `request_timeout_secs` |
/// | `LCR_CAUTION` | `caution` |
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: String,
    /// Signal store directory. Without one the service starts with an empty store.
    pub store: Option<PathBuf>,
    /// Sentence index file. When absent or missing the index is built from
    /// the store at startup.
    pub index: Option<PathBuf>,
    /// Remote NLP backend; the baseline backend is used without one.
    pub backend_url: Option<String>,
    /// Bot registry TOML; the standard six bots without one.
    pub registry: Option<PathBuf>,
    /// Bot parameters TOML.
    pub bot_config: Option<PathBuf>,
    pub request_timeout_secs: u64,
    /// Overrides `caution.enabled` of the bot parameters when set.
    pub caution: Option<bool>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: "127.0.0.1:8080".into(),
            store: None,
            index: None,
            backend_url: None,
            registry: None,
            bot_config: None,
            request_timeout_secs: 30,
            caution: None,
        }
    }
}

fn parse_bool(name: &str, v: &str) -> Result<bool, ServiceError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(ServiceError::Config(format!("{name}={v:?} is not a boolean"))),
    }
}

impl ServiceConfig {
    pub fn from_toml(text: &str) -> Result<Self, ServiceError> {
        toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))
    }

    /// Read `path` (defaults when `None`), apply the process environment and validate.
    pub fn load(path: Option<&Path>) -> Result<Self, ServiceError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ServiceError::Config(format!("{}: {e}", p.display())))?;
                Self::from_toml(&text)?
            }
            None => Self::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<(), ServiceError> {
        if let Some(v) = get("LCR_BIND") {
            self.bind = v;
        }
        if let Some(v) = get("LCR_STORE") {
            self.store = Some(v.into());
        }
        if let Some(v) = get("LCR_INDEX") {
            self.index = Some(v.into());
        }
        if let Some(v) = get("LCR_BACKEND_URL") {
            self.backend_url = (!v.trim().is_empty()).then_some(v);
        }
        if let Some(v) = get("LCR_REGISTRY") {
            self.registry = Some(v.into());
        }
        if let Some(v) = get("LCR_BOT_CONFIG") {
            self.bot_config = Some(v.into());
        }
        if let Some(v) = get("LCR_REQUEST_TIMEOUT_SECS") {
            self.request_timeout_secs = v
                .trim()
                .parse()
                .map_err(|_| ServiceError::Config(format!("LCR_REQUEST_TIMEOUT_SECS={v:?} is not a number")))?;
        }
        if let Some(v) = get("LCR_CAUTION") {
            self.caution = Some(parse_bool("LCR_CAUTION", &v)?);
        }
        Ok(())
    }

    /// The timeout is positive and every configured input path exists,
    /// except the index file, whose absence only degrades the service.
    pub fn validate(&self) -> Result<(), ServiceError> {
        if self.request_timeout_secs == 0 {
            return Err(ServiceError::Config("request_timeout_secs must be positive".into()));
        }
        let required = [("store", &self.store), ("registry", &self.registry), ("bot_config", &self.bot_config)];
        for (name, path) in required {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(ServiceError::Config(format!("{name} path {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }

    pub fn request_timeout(&self) -> Duration {
        Duration::from_secs(self.request_timeout_secs)
    }
}
