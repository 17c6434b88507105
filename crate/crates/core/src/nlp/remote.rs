//! HTTP client for a model server.
//!
//! Endpoints:
//!
//! * `GET /info` → `{"backend_id": str, "dim": int}`
//! * `POST /encode` `{"sentences": [str]}` → `{"dim": int, "vectors": [[f32]]}`
//! * `POST /stance` `{"pairs": [{"source", "target"}]}` →
//!   `{"judgments": [{"label", "score"}]}`

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{NlpError, SentenceEncoder, SentenceVector, StanceDetector, StanceJudgment};

#[derive(Debug, Deserialize)]
struct Info {
    backend_id: String,
    dim: usize,
}

#[derive(Serialize)]
struct EncodeRequest<'a> {
    sentences: &'a [&'a str],
}

#[derive(Deserialize)]
struct EncodeResponse {
    dim: usize,
    vectors: Vec<Vec<f32>>,
}

#[derive(Serialize)]
struct Pair<'a> {
    source: &'a str,
    target: &'a str,
}

#[derive(Serialize)]
struct StanceRequest<'a> {
    pairs: Vec<Pair<'a>>,
}

#[derive(Deserialize)]
struct StanceResponse {
    judgments: Vec<StanceJudgment>,
}

/// Encoder and stance detector backed by a model server. Cloning shares the
/// connection pool.
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    agent: ureq::Agent,
    base: String,
    backend_id: String,
    dim: usize,
}

fn classify(e: ureq::Error) -> NlpError {
    match e {
        ureq::Error::StatusCode(code) => NlpError::Backend(format!("HTTP {code}")),
        ureq::Error::Json(e) => NlpError::Backend(format!("bad response: {e}")),
        other => NlpError::Unavailable(other.to_string()),
    }
}

impl RemoteBackend {
    /// Query `/info` and return a client bound to the reported backend.
    pub fn connect(base_url: &str, timeout: Duration) -> Result<Self, NlpError> {
        let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        let base = base_url.trim_end_matches('/').to_string();
        let info: Info = agent
            .get(format!("{base}/info"))
            .call()
            .and_then(|mut r| r.body_mut().read_json())
            .map_err(classify)?;
        if info.dim == 0 {
            return Err(NlpError::Backend("server reports dim 0".into()));
        }
        Ok(RemoteBackend {
            agent,
            base,
            backend_id: info.backend_id,
            dim: info.dim,
        })
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn post<Req: Serialize, Resp: serde::de::DeserializeOwned>(&self, path: &str, body: &Req) -> Result<Resp, NlpError> {
        self.agent
            .post(format!("{}{path}", self.base))
            .send_json(body)
            .and_then(|mut r| r.body_mut().read_json())
            .map_err(classify)
    }
}

impl SentenceEncoder for RemoteBackend {
    fn backend_id(&self) -> &str {
        &self.backend_id
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn encode_batch(&self, sentences: &[&str]) -> Result<Vec<SentenceVector>, NlpError> {
        if sentences.iter().any(|s| s.trim().is_empty()) {
            return Err(NlpError::EmptyText);
        }
        if sentences.is_empty() {
            return Ok(Vec::new());
        }
        let resp: EncodeResponse = self.post("/encode", &EncodeRequest { sentences })?;
        if resp.vectors.len() != sentences.len() {
            return Err(NlpError::Backend(format!(
                "{} vectors for {} sentences",
                resp.vectors.len(),
                sentences.len()
            )));
        }
        if resp.dim != self.dim {
            return Err(NlpError::DimensionMismatch { expected: self.dim, found: resp.dim });
        }
        resp.vectors
            .into_iter()
            .map(|v| {
                if v.len() != self.dim {
                    return Err(NlpError::DimensionMismatch { expected: self.dim, found: v.len() });
                }
                SentenceVector::from_raw(v)
            })
            .collect()
    }
}

impl StanceDetector for RemoteBackend {
    fn stance_batch(&self, pairs: &[(&str, &str)]) -> Result<Vec<StanceJudgment>, NlpError> {
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        let req = StanceRequest {
            pairs: pairs.iter().map(|&(source, target)| Pair { source, target }).collect(),
        };
        let resp: StanceResponse = self.post("/stance", &req)?;
        if resp.judgments.len() != pairs.len() {
            return Err(NlpError::Backend(format!(
                "{} judgments for {} pairs",
                resp.judgments.len(),
                pairs.len()
            )));
        }
        if let Some(j) = resp.judgments.iter().find(|j| !(0.0..=1.0).contains(&j.score)) {
            return Err(NlpError::Backend(format!("stance score {} outside [0, 1]", j.score)));
        }
        Ok(resp.judgments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreachable_server_is_unavailable() {
        // Port 9 (discard) is closed on test hosts.
        let err = RemoteBackend::connect("http://127.0.0.1:9", Duration::from_millis(500)).unwrap_err();
        assert!(matches!(err, NlpError::Unavailable(_)), "{err}");
    }
}
