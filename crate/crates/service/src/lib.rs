//! HTTP API over the conversion, suggestion and corpus tooling.
//!
//! Every endpoint except `/health` needs `Authorization: Bearer <token>`
//! for a configured session. See `docs/api.md` for the request and response
//! shapes.

pub mod auth;
pub mod error;
pub mod routes;
pub mod store;

use std::path::PathBuf;
use std::sync::Arc;

use axum::routing::{get, post};
use axum::Router;
use rasmi_core::converter::{ConverterData, DataError, DataPaths};
use rasmi_core::{Converter, ConverterConfig};
use thiserror::Error;
use tokio::net::TcpListener;

pub use auth::{ApiSession, Role, Sessions};
pub use error::ApiError;
pub use store::{RecordFilter, RecordView, Store, StoreError};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub converter: Arc<Converter>,
    pub sessions: Arc<Sessions>,
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Where the corpus and history snapshot live; in memory when unset.
    pub data_dir: Option<PathBuf>,
    pub data: DataPaths,
    pub sessions: Vec<ApiSession>,
}

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Data(#[from] DataError),
}

impl AppState {
    pub fn new(store: Store, converter: Converter, sessions: Sessions) -> Self {
        AppState { store: Arc::new(store), converter: Arc::new(converter), sessions: Arc::new(sessions) }
    }

    pub fn from_config(cfg: &ServiceConfig) -> Result<Self, ServiceError> {
        let store = match &cfg.data_dir {
            Some(dir) => Store::open(dir)?,
            None => Store::in_memory(),
        };
        let converter = Converter::new(ConverterData::load(&cfg.data)?, ConverterConfig::default());
        Ok(AppState::new(store, converter, Sessions::new(cfg.sessions.iter().cloned())))
    }
}

pub fn router(state: AppState) -> Router {
    use routes::*;
    Router::new()
        .route("/health", get(health))
        .route("/session", get(session))
        .route("/convert", post(convert))
        .route("/suggest", post(suggest))
        .route("/records", post(create_record).get(list_records))
        .route("/records/{id}", get(get_record).put(update_record).delete(delete_record))
        .route("/records/{id}/status", post(set_status))
        .route("/stats", get(stats))
        .route("/stats/sources", get(stats_sources))
        .route("/dictionary", get(dictionary))
        .route("/evaluate", post(evaluate))
        .with_state(state)
}

/// Serves until Ctrl-C.
pub async fn serve(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
