use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use rasmi_core::corpus::Issue;
use serde::Serialize;
use thiserror::Error;

use crate::store::{RecordView, StoreError};

/// Every error response is JSON: `{"error": code, "message": ..., ...}`.
#[derive(Debug, Error)]
pub enum ApiError {
    #[error("missing or unknown bearer token")]
    Unauthorized,
    #[error("{0}")]
    Forbidden(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{message}")]
    Conflict { message: String, current: Option<Box<RecordView>> },
    #[error("{message}")]
    Validation { message: String, issues: Vec<Issue> },
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Internal(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "<[Issue]>::is_empty")]
    issues: &'a [Issue],
    #[serde(skip_serializing_if = "Option::is_none")]
    current: Option<&'a RecordView>,
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::Unauthorized => StatusCode::UNAUTHORIZED,
            ApiError::Forbidden(_) => StatusCode::FORBIDDEN,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict { .. } => StatusCode::CONFLICT,
            ApiError::Validation { .. } | ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            ApiError::Unauthorized => "unauthorized",
            ApiError::Forbidden(_) => "forbidden",
            ApiError::NotFound(_) => "not-found",
            ApiError::Conflict { .. } => "conflict",
            ApiError::Validation { .. } => "validation",
            ApiError::BadRequest(_) => "bad-request",
            ApiError::Internal(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if let ApiError::Internal(m) = &self {
            log::error!("{m}");
        }
        let (issues, current): (&[Issue], _) = match &self {
            ApiError::Validation { issues, .. } => (issues, None),
            ApiError::Conflict { current, .. } => (&[], current.as_deref()),
            _ => (&[], None),
        };
        let body = ErrorBody { error: self.code(), message: self.to_string(), issues, current };
        (self.status(), Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::BadRequest(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::BadRequest(r.body_text())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let message = e.to_string();
        match e {
            StoreError::NotFound(_) => ApiError::NotFound(message),
            StoreError::Duplicate(_) => ApiError::Conflict { message, current: None },
            StoreError::VersionConflict { current, .. } => ApiError::Conflict { message, current: Some(current) },
            StoreError::Invalid(issues) => ApiError::Validation { message, issues },
            StoreError::Transition(_) => ApiError::Validation { message, issues: Vec::new() },
            StoreError::Io(_) | StoreError::Corpus(_) | StoreError::Snapshot(_) | StoreError::Stored { .. } => {
                ApiError::Internal(message)
            }
        }
    }
}
