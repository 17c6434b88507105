use thiserror::Error;

use super::graph::Violation;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{field} {value} is outside [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("{0} text is empty")]
    EmptyText(&'static str),
    #[error("invalid domain {0:?}")]
    InvalidDomain(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown @type {0:?}")]
    UnknownType(String),
    #[error("node {node}: missing required field {field}")]
    MissingField { node: String, field: &'static str },
    #[error("node {node}: invalid {field}: {reason}")]
    InvalidField {
        node: String,
        field: &'static str,
        reason: String,
    },
    #[error("graph invariant violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}
