use axum::body::{Body, Bytes};
use axum::extract::{FromRequest, FromRequestParts, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use chrono::{DateTime, FixedOffset, Utc};
use rasmi_core::alignment::{has_syntactic_change, AlignmentLink};
use rasmi_core::corpus::{CorpusRecord, CorpusStats, Issue, Source, SourceShare, Status};
use rasmi_core::eval::{evaluate_corpus, BleuConfig, EvalReport};
use rasmi_core::suggest::Suggestion;
use rasmi_core::{normalize_text, ConversionResult};
use serde::{Deserialize, Serialize};

use crate::auth::{ApiSession, Role};
use crate::error::ApiError;
use crate::store::{RecordFilter, RecordView};
use crate::AppState;

/// JSON body extractor whose rejections use the API error format.
#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
pub struct ApiJson<T>(pub T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Query), rejection(ApiError))]
pub struct ApiQuery<T>(pub T);

fn normalized(s: &str) -> String {
    normalize_text(s).into_string()
}

pub async fn health() -> &'static str {
    "ok"
}

pub async fn session(s: ApiSession) -> Json<ApiSession> {
    Json(s)
}

#[derive(Debug, Deserialize)]
pub struct ConvertRequest {
    pub text: String,
}

pub async fn convert(
    _: ApiSession,
    State(st): State<AppState>,
    ApiJson(req): ApiJson<ConvertRequest>,
) -> Json<ConversionResult> {
    Json(st.converter.convert(&req.text))
}

#[derive(Debug, Deserialize)]
pub struct SuggestRequest {
    pub informal: String,
    pub formal: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SuggestResponse {
    pub informal_tokens: Vec<String>,
    pub formal_tokens: Vec<String>,
    pub suggestions: Vec<Suggestion>,
}

pub async fn suggest(
    _: ApiSession,
    State(st): State<AppState>,
    ApiJson(req): ApiJson<SuggestRequest>,
) -> Result<Json<SuggestResponse>, ApiError> {
    let words = |s: &str| normalized(s).split(' ').filter(|t| !t.is_empty()).map(str::to_string).collect::<Vec<_>>();
    let (informal_tokens, formal_tokens) = (words(&req.informal), words(&req.formal));
    if informal_tokens.is_empty() || formal_tokens.is_empty() {
        return Err(ApiError::BadRequest("both sentences must be non-empty".into()));
    }
    let suggestions = st.store.history().suggest(&informal_tokens, &formal_tokens);
    Ok(Json(SuggestResponse { informal_tokens, formal_tokens, suggestions }))
}

#[derive(Debug, Deserialize)]
pub struct NewRecord {
    pub id: Option<String>,
    pub informal: String,
    pub formal: String,
    #[serde(default)]
    pub links: Vec<AlignmentLink>,
    pub source: Source,
    /// Defaults to the session's annotator.
    pub annotator: Option<String>,
    /// Defaults to now, in UTC.
    pub created_at: Option<DateTime<FixedOffset>>,
    /// Defaults to what the links imply.
    pub syntactic_change: Option<bool>,
}

#[derive(Debug, Deserialize)]
pub struct UpdateRecord {
    pub version: u64,
    pub informal: String,
    pub formal: String,
    pub links: Vec<AlignmentLink>,
    pub source: Source,
    pub annotator: Option<String>,
    pub created_at: Option<DateTime<FixedOffset>>,
    pub syntactic_change: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RecordResponse {
    #[serde(flatten)]
    pub view: RecordView,
    /// Validation warnings; errors are rejected.
    pub warnings: Vec<Issue>,
}

pub async fn create_record(
    s: ApiSession,
    State(st): State<AppState>,
    ApiJson(req): ApiJson<NewRecord>,
) -> Result<(StatusCode, Json<RecordResponse>), ApiError> {
    let record = CorpusRecord {
        id: req.id.unwrap_or_else(|| uuid::Uuid::new_v4().to_string()),
        informal: normalized(&req.informal),
        formal: normalized(&req.formal),
        syntactic_change: req.syntactic_change.unwrap_or_else(|| has_syntactic_change(&req.links)),
        links: req.links,
        source: req.source,
        annotator: req.annotator.unwrap_or(s.annotator),
        created_at: req.created_at.unwrap_or_else(|| Utc::now().fixed_offset()),
        status: Status::Draft,
    };
    let (view, warnings) = st.store.create(record)?;
    Ok((StatusCode::CREATED, Json(RecordResponse { view, warnings })))
}

#[derive(Debug, Default, Deserialize)]
pub struct RecordQuery {
    pub source: Option<Source>,
    pub status: Option<Status>,
    pub annotator: Option<String>,
    pub q: Option<String>,
}

pub async fn list_records(
    _: ApiSession,
    State(st): State<AppState>,
    ApiQuery(q): ApiQuery<RecordQuery>,
) -> Json<Vec<RecordView>> {
    let filter = RecordFilter {
        source: q.source,
        status: q.status,
        annotator: q.annotator.filter(|a| !a.is_empty()),
        q: q.q.filter(|s| !s.is_empty()).map(|s| normalized(&s)),
    };
    Json(st.store.list(&filter))
}

pub async fn get_record(
    _: ApiSession,
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<RecordView>, ApiError> {
    st.store.get(&id).map(Json).ok_or_else(|| ApiError::NotFound(format!("no record with id `{id}`")))
}

pub async fn update_record(
    _: ApiSession,
    State(st): State<AppState>,
    Path(id): Path<String>,
    ApiJson(req): ApiJson<UpdateRecord>,
) -> Result<Json<RecordResponse>, ApiError> {
    let current = st.store.get(&id).ok_or_else(|| ApiError::NotFound(format!("no record with id `{id}`")))?;
    let record = CorpusRecord {
        id: id.clone(),
        informal: normalized(&req.informal),
        formal: normalized(&req.formal),
        syntactic_change: req.syntactic_change.unwrap_or_else(|| has_syntactic_change(&req.links)),
        links: req.links,
        source: req.source,
        annotator: req.annotator.unwrap_or(current.record.annotator),
        created_at: req.created_at.unwrap_or(current.record.created_at),
        status: current.record.status,
    };
    let (view, warnings) = st.store.update(&id, req.version, record)?;
    Ok(Json(RecordResponse { view, warnings }))
}

#[derive(Debug, Default, Deserialize)]
pub struct VersionQuery {
    pub version: Option<u64>,
}

pub async fn delete_record(
    _: ApiSession,
    State(st): State<AppState>,
    Path(id): Path<String>,
    ApiQuery(q): ApiQuery<VersionQuery>,
) -> Result<StatusCode, ApiError> {
    st.store.delete(&id, q.version)?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Debug, Deserialize)]
pub struct StatusChange {
    pub status: Status,
    pub version: Option<u64>,
}

pub async fn set_status(
    s: ApiSession,
    State(st): State<AppState>,
    Path(id): Path<String>,
    ApiJson(req): ApiJson<StatusChange>,
) -> Result<Json<RecordView>, ApiError> {
    if req.status == Status::Confirmed && s.role != Role::Leader {
        return Err(ApiError::Forbidden("only a leader can confirm a record".into()));
    }
    Ok(Json(st.store.set_status(&id, req.status, req.version)?))
}

pub async fn stats(_: ApiSession, State(st): State<AppState>) -> Json<CorpusStats> {
    Json(st.store.stats())
}

pub async fn stats_sources(_: ApiSession, State(st): State<AppState>) -> Json<Vec<SourceShare>> {
    Json(st.store.stats().source_shares())
}

/// The extracted dictionary as TSV, sent one entry per chunk.
pub async fn dictionary(_: ApiSession, State(st): State<AppState>) -> Response {
    let lex = st.store.dictionary();
    let lines: Vec<Result<Bytes, std::io::Error>> = lex
        .iter()
        .map(|e| {
            let cat = e.category.map(|c| c.as_str()).unwrap_or("");
            Ok(Bytes::from(format!("{}\t{}\t{}\t{cat}\n", e.informal, e.formal, e.frequency)))
        })
        .collect();
    let body = Body::from_stream(futures_util::stream::iter(lines));
    (
        [
            (header::CONTENT_TYPE, "text/tab-separated-values; charset=utf-8"),
            (header::CONTENT_DISPOSITION, "attachment; filename=\"dictionary.tsv\""),
        ],
        body,
    )
        .into_response()
}

/// Sentences as a JSON array or as one newline-separated string.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Lines {
    List(Vec<String>),
    Text(String),
}

impl Lines {
    fn into_vec(self) -> Vec<String> {
        match self {
            Lines::List(v) => v,
            Lines::Text(t) => t.lines().map(str::to_string).collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct EvaluateRequest {
    pub hyp: Lines,
    #[serde(rename = "ref")]
    pub reference: Lines,
    pub min_len: Option<usize>,
    pub max_len: Option<usize>,
}

pub async fn evaluate(_: ApiSession, ApiJson(req): ApiJson<EvaluateRequest>) -> Result<Json<EvalReport>, ApiError> {
    let mut cfg = BleuConfig::default();
    if req.min_len.is_some() || req.max_len.is_some() {
        cfg = cfg.with_length_filter(req.min_len.unwrap_or(0), req.max_len.unwrap_or(usize::MAX));
    }
    let report = evaluate_corpus(&req.hyp.into_vec(), &req.reference.into_vec(), &cfg)
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;
    Ok(Json(report))
}
