//! HTTP API over the goalkeeper positioning engine.
//!
//! All routes live under `/api/v1`; see `docs/api.md` for the payloads.
//! Loaded matches are immutable, so handlers share them without locking.

pub mod api;
pub mod report;
pub mod store;

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use keeper_core::episodes::flag_eligibility;
use keeper_core::Config;
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::api::{frame_at, simulate, EpisodeDetail, Page, Paged, SimulationRequest, Unprocessable, MAX_LIMIT};
use crate::store::{episode_summary, match_summary, summarize, Store};

#[derive(Clone)]
pub struct AppState {
    pub config: Arc<Config>,
    pub store: Arc<Store>,
}

impl AppState {
    pub fn new(config: Config, store: Store) -> Self {
        Self { config: Arc::new(config), store: Arc::new(store) }
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Unprocessable(String),
}

impl From<Unprocessable> for ApiError {
    fn from(e: Unprocessable) -> Self {
        ApiError::Unprocessable(e.0)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Unprocessable(m) => (StatusCode::UNPROCESSABLE_ENTITY, m),
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

const PLACEHOLDER_PAGE: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>keeper</title></head>\n\
<body><h1>keeper</h1><p>No UI bundle configured. Start the server with <code>--ui-dir</code>, or use the\n\
JSON API under <a href=\"/api/v1/matches\">/api/v1</a>.</p></body></html>\n";

pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/v1/matches", get(list_matches))
        .route("/api/v1/matches/{id}/episodes", get(list_episodes))
        .route("/api/v1/episodes/{id}", get(get_episode))
        .route("/api/v1/episodes/{id}/frames", get(get_frame))
        .route("/api/v1/simulate", post(post_simulate))
        .route("/api/v1/config", get(get_config))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER_PAGE) })),
    }
}

async fn list_matches(State(s): State<AppState>) -> impl IntoResponse {
    let out: Vec<_> = s.store.matches().iter().map(match_summary).collect();
    Json(out)
}

async fn list_episodes(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(page): Query<Page>,
) -> Result<impl IntoResponse, ApiError> {
    let m = s.store.get_match(&id).ok_or_else(|| ApiError::NotFound(format!("unknown match {id}")))?;
    let limit = page.limit.min(MAX_LIMIT);
    let items = m.episodes.iter().skip(page.offset).take(limit).map(|ep| summarize(ep, &s.config)).collect();
    Ok(Json(Paged { total: m.episodes.len(), offset: page.offset, limit, items }))
}

async fn get_episode(State(s): State<AppState>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let ep = s.store.get_episode(&id).ok_or_else(|| ApiError::NotFound(format!("unknown episode {id}")))?;
    let flags = flag_eligibility(ep, &s.config);
    Ok(Json(EpisodeDetail { summary: episode_summary(ep, &flags), events: ep.events.clone(), flags }))
}

#[derive(Deserialize)]
struct FrameQuery {
    t: f64,
}

async fn get_frame(
    State(s): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<FrameQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<impl IntoResponse, ApiError> {
    let ep = s.store.get_episode(&id).ok_or_else(|| ApiError::NotFound(format!("unknown episode {id}")))?;
    let Query(q) = query.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    Ok(Json(frame_at(ep, q.t, &s.config)?))
}

/// Parses the body by hand so that malformed JSON maps to 400 and a request
/// that parses but cannot be evaluated maps to 422.
async fn post_simulate(State(s): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let req: SimulationRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::BadRequest(format!("malformed request body: {e}")))?;
    Ok(Json(simulate(&req, &s.config)?))
}

async fn get_config(State(s): State<AppState>) -> impl IntoResponse {
    Json(s.config.as_ref().clone())
}
