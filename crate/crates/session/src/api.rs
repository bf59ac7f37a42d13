use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::session::{CreateRequest, SessionError};
use crate::store::Store;

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub detail: serde_json::Value,
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let body = ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
            detail: self.detail(),
        };
        (status, Json(body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
pub struct AttackBody {
    pub edge: (String, String),
}

#[derive(Debug, Deserialize)]
pub struct DefenseBody {
    pub moves: Vec<(String, String)>,
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, SessionError> {
    payload
        .map(|Json(t)| t)
        .map_err(|e| SessionError::BadRequest(e.body_text()))
}

async fn create(
    State(store): State<Arc<Store>>,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<Response, SessionError> {
    let req = body(payload)?;
    let view = tokio::task::spawn_blocking(move || store.create(&req))
        .await
        .map_err(|e| SessionError::Internal(e.to_string()))??;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn state(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Response, SessionError> {
    Ok(Json(store.view(&id)?.as_ref().clone()).into_response())
}

async fn close(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Response, SessionError> {
    Ok(Json(store.close(&id)?.as_ref().clone()).into_response())
}

async fn attack(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    payload: Result<Json<AttackBody>, JsonRejection>,
) -> Result<Response, SessionError> {
    let AttackBody { edge: (u, v) } = body(payload)?;
    Ok(Json(store.attack(&id, &u, &v)?).into_response())
}

async fn defense(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    payload: Result<Json<DefenseBody>, JsonRejection>,
) -> Result<Response, SessionError> {
    let DefenseBody { moves } = body(payload)?;
    Ok(Json(store.defend(&id, &moves)?).into_response())
}

async fn trace(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Response, SessionError> {
    let text = store.trace(&id)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response())
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(state).delete(close))
        .route("/sessions/{id}/attack", post(attack))
        .route("/sessions/{id}/defense", post(defense))
        .route("/sessions/{id}/trace", get(trace))
        .with_state(store)
}
