//! The HTTP/JSON API over a [`Portal`].

use std::collections::HashMap;
use std::future::Future;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;
use voxfeed_core::dialog::{Command, DialogInput, SemanticTag};

use crate::portal::{Portal, PortalError};

impl PortalError {
    pub fn status(&self) -> StatusCode {
        match self {
            PortalError::InvalidUrl(_)
            | PortalError::InvalidCredentials(_)
            | PortalError::MalformedInput(_)
            | PortalError::BadFormat(_) => StatusCode::BAD_REQUEST,
            PortalError::UnknownFeed(_) | PortalError::UnknownSession(_) => StatusCode::NOT_FOUND,
            PortalError::DuplicateSubscription(_) | PortalError::FeedNotLoaded { .. } => StatusCode::CONFLICT,
            PortalError::UpstreamFailure(_) => StatusCode::BAD_GATEWAY,
            PortalError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for PortalError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.code(), "message": self.to_string() });
        if let PortalError::UpstreamFailure(summary) = &self {
            body["feed_id"] = json!(summary.feed_id);
            body["last_error"] = json!(summary.last_error);
        }
        (self.status(), Json(body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct SubscribeRequest {
    url: String,
    username: Option<String>,
    password: Option<String>,
}

#[derive(Debug, Deserialize)]
struct SessionRequest {
    feed_id: String,
}

/// Wire form of a dialog input: `{"kind": "phrase"|"shortcut"|"command", "value": "..."}`.
#[derive(Debug, Deserialize)]
pub struct InputRequest {
    pub kind: String,
    pub value: String,
}

impl InputRequest {
    pub fn to_input(&self) -> Result<DialogInput, PortalError> {
        match self.kind.as_str() {
            "phrase" => self
                .value
                .parse::<SemanticTag>()
                .map(DialogInput::PhraseMatch)
                .map_err(|e| PortalError::MalformedInput(e.to_string())),
            "shortcut" => Ok(DialogInput::shortcut(&self.value)),
            "command" => self
                .value
                .parse::<Command>()
                .map(DialogInput::Command)
                .map_err(|e| PortalError::MalformedInput(e.to_string())),
            other => Err(PortalError::MalformedInput(format!(
                "unknown input kind {other:?} (expected phrase, shortcut or command)"
            ))),
        }
    }
}

fn json_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, PortalError> {
    serde_json::from_slice(body).map_err(|e| PortalError::MalformedInput(e.to_string()))
}

pub fn router(portal: Arc<Portal>, ui_dir: Option<PathBuf>) -> Router {
    let mut app = Router::new()
        .route("/feeds", post(subscribe).get(list_feeds))
        .route("/feeds/{feed_id}/refresh", post(refresh))
        .route("/feeds/{feed_id}/dialog", get(dialog))
        .route("/feeds/{feed_id}/history", get(history))
        .route("/sessions", post(create_session))
        .route("/sessions/{session_id}", get(session))
        .route("/sessions/{session_id}/input", post(input))
        .with_state(portal);
    if let Some(dir) = ui_dir {
        app = app.nest_service("/ui", ServeDir::new(dir).append_index_html_on_directories(true));
    }
    app
}

/// Serves the API on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    portal: Arc<Portal>,
    ui_dir: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(portal, ui_dir))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn subscribe(State(portal): State<Arc<Portal>>, body: Bytes) -> Result<Response, PortalError> {
    let req: SubscribeRequest = json_body(&body)?;
    let credentials = match (&req.username, &req.password) {
        (None, None) => None,
        (Some(u), p) => Some((u.as_str(), p.as_deref().unwrap_or(""))),
        (None, Some(_)) => return Err(PortalError::InvalidCredentials("password given without username".into())),
    };
    let feed_id = portal.subscribe_feed(&req.url, credentials).await?;
    Ok((StatusCode::CREATED, Json(json!({ "feed_id": feed_id }))).into_response())
}

async fn list_feeds(State(portal): State<Arc<Portal>>) -> Response {
    Json(portal.list_feeds()).into_response()
}

async fn refresh(State(portal): State<Arc<Portal>>, Path(feed_id): Path<String>) -> Result<Response, PortalError> {
    Ok(Json(portal.refresh_feed(&feed_id).await?).into_response())
}

async fn dialog(
    State(portal): State<Arc<Portal>>,
    Path(feed_id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, PortalError> {
    let format = query.get("format").map(String::as_str).unwrap_or_default();
    let doc = portal.dialog_document(&feed_id, format)?;
    Ok(([(header::CONTENT_TYPE, doc.content_type())], doc.to_bytes()).into_response())
}

async fn history(State(portal): State<Arc<Portal>>, Path(feed_id): Path<String>) -> Result<Response, PortalError> {
    Ok(Json(portal.history(&feed_id)?).into_response())
}

async fn create_session(State(portal): State<Arc<Portal>>, body: Bytes) -> Result<Response, PortalError> {
    let req: SessionRequest = json_body(&body)?;
    let view = portal.create_session(&req.feed_id)?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn session(State(portal): State<Arc<Portal>>, Path(session_id): Path<String>) -> Result<Response, PortalError> {
    Ok(Json(portal.session_view(&session_id)?).into_response())
}

async fn input(
    State(portal): State<Arc<Portal>>,
    Path(session_id): Path<String>,
    body: Bytes,
) -> Result<Response, PortalError> {
    let req: InputRequest = json_body(&body)?;
    let input = req.to_input()?;
    Ok(Json(portal.post_input(&session_id, &input)?).into_response())
}
