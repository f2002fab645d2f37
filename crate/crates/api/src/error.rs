use axum::extract::multipart::MultipartError;
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use scorelens_core::{AnalyticsError, CorpusError, ScoreError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadRequest,
    NotFound,
    Conflict,
    Unprocessable,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::Conflict => StatusCode::CONFLICT,
            ErrorCode::Unprocessable => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// Body of every error response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(default)]
    pub detail: Option<String>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::BadRequest, message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::NotFound, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.code == ErrorCode::Internal {
            tracing::error!(message = %self.message, detail = ?self.detail, "internal error");
        }
        (self.code.status(), Json(self)).into_response()
    }
}

impl From<CorpusError> for ApiError {
    fn from(e: CorpusError) -> Self {
        let code = match &e {
            CorpusError::UnknownComposition(_) | CorpusError::UnknownName(_) => ErrorCode::NotFound,
            CorpusError::UnknownFeature(_) | CorpusError::Excluded(_) => ErrorCode::Unprocessable,
            CorpusError::Duplicate { .. } | CorpusError::DuplicateName(_) => ErrorCode::Conflict,
            CorpusError::EmptySelection | CorpusError::InvalidName(_) | CorpusError::InvalidComposer { .. } => {
                ErrorCode::BadRequest
            }
            CorpusError::Score(s) => score_code(s),
            CorpusError::Io { .. } | CorpusError::Json { .. } => ErrorCode::Internal,
        };
        Self::new(code, e.to_string())
    }
}

fn score_code(e: &ScoreError) -> ErrorCode {
    match e {
        ScoreError::Archive(_) => ErrorCode::BadRequest,
        ScoreError::Xml(_) | ScoreError::Unsupported(_) => ErrorCode::Unprocessable,
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        let code = match e {
            AnalyticsError::TooFewEntities { .. } | AnalyticsError::UnknownFeature(_) => ErrorCode::Unprocessable,
            _ => ErrorCode::BadRequest,
        };
        Self::new(code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::bad_request("invalid JSON body").with_detail(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        Self::bad_request("invalid query string").with_detail(r.body_text())
    }
}

impl From<MultipartError> for ApiError {
    fn from(e: MultipartError) -> Self {
        Self::bad_request("invalid multipart body").with_detail(e.body_text())
    }
}
