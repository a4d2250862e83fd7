//! HTTP/JSON API for playing either game against the engine.
//!
//! | route | |
//! |---|---|
//! | `POST /api/v1/sessions` | new session, 201 |
//! | `GET /api/v1/sessions/{id}` | session state |
//! | `POST /api/v1/sessions/{id}/moves` | human move plus engine reply |
//! | `GET /api/v1/grid?maxWeight=W` | Game 2 verdicts for `2x+y <= W`, `W <= 4096` |
//! | `GET /api/v1/classify?game=..` | verdict of one position |
//!
//! Errors are `{code, message, constraint?}`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dynnim::harness::tables::g2_rows;
use dynnim::harness::Game;
use dynnim::{classify_g1, classify_g2, BoundFn, PFamily, TurnPosition, Verdict, WeightedPosition};
use serde::{Deserialize, Serialize};

pub mod session;
pub mod store;

use session::{MoveRequest, NewSession, Session, SessionError, SessionView, Status};
use store::SessionStore;

pub const MAX_GRID_WEIGHT: u64 = 4096;
pub const GRID_CACHE_CONTROL: &str = "public, max-age=86400";

#[derive(Clone, Default)]
pub struct AppState {
    pub store: Arc<SessionStore>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constraint: Option<String>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ApiErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ApiErrorBody {
                code: code.into(),
                message: message.into(),
                constraint: None,
            },
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid-request", message)
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "not-found",
            format!("no session `{id}`"),
        )
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Invalid(m) => ApiError::bad_request(m),
            SessionError::IllegalMove(v) => {
                let mut err = ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "illegal-move",
                    v.to_string(),
                );
                err.body.constraint = Some(v.constraint().to_string());
                err
            }
            SessionError::GameOver(status) => ApiError::new(
                StatusCode::CONFLICT,
                "game-over",
                format!("the game is over ({})", status_name(status)),
            ),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::InProgress => "in-progress",
        Status::HumanWon => "human-won",
        Status::EngineWon => "engine-won",
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/sessions", post(create_session))
        .route("/api/v1/sessions/{id}", get(get_session))
        .route("/api/v1/sessions/{id}/moves", post(submit_move))
        .route("/api/v1/grid", get(grid))
        .route("/api/v1/classify", get(classify))
        .with_state(state)
}

/// Serves the API until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::default())).await
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<NewSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    let session = Session::create(uuid::Uuid::new_v4().to_string(), &req)?;
    let view = session.view();
    state.store.insert(session);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let slot = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let session = slot.lock().unwrap_or_else(|e| e.into_inner());
    Ok(Json(session.view()))
}

async fn submit_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<SessionView>, ApiError> {
    let slot = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let Json(mv) = body?;
    let mut session = store::try_lock(&slot).ok_or_else(|| {
        ApiError::new(
            StatusCode::CONFLICT,
            "session-busy",
            "another move on this session is in flight",
        )
    })?;
    session.submit(mv)?;
    Ok(Json(session.view()))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GridQuery {
    max_weight: u64,
}

async fn grid(query: Result<Query<GridQuery>, QueryRejection>) -> Result<Response, ApiError> {
    let Query(q) = query?;
    if q.max_weight > MAX_GRID_WEIGHT {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "range-exceeded",
            format!("maxWeight {} > {MAX_GRID_WEIGHT}", q.max_weight),
        ));
    }
    let rows = tokio::task::spawn_blocking(move || g2_rows(q.max_weight))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    Ok(([(header::CACHE_CONTROL, GRID_CACHE_CONTROL)], Json(rows)).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyQuery {
    game: Game,
    f: Option<String>,
    x: Option<u64>,
    y: Option<u64>,
    u: Option<u64>,
    k: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Classification {
    G1 {
        game: Game,
        f: BoundFn,
        position: TurnPosition,
        verdict: Verdict,
        block: Option<u64>,
    },
    G2 {
        game: Game,
        position: WeightedPosition,
        verdict: Verdict,
        family: Option<PFamily>,
    },
}

async fn classify(
    query: Result<Query<ClassifyQuery>, QueryRejection>,
) -> Result<Json<Classification>, ApiError> {
    let Query(q) = query?;
    let invalid = |e: dynnim::Error| ApiError::bad_request(e.to_string());
    match q.game {
        Game::G1 => {
            let f: BoundFn =
                q.f.as_deref()
                    .ok_or_else(|| ApiError::bad_request("g1 needs `f`"))?
                    .parse()
                    .map_err(invalid)?;
            let stones =
                q.u.or(q.x)
                    .ok_or_else(|| ApiError::bad_request("g1 needs `u`"))?;
            let position = TurnPosition::new(stones, q.k.unwrap_or(1)).map_err(invalid)?;
            let c = classify_g1(position, &f);
            Ok(Json(Classification::G1 {
                game: Game::G1,
                f,
                position,
                verdict: c.verdict,
                block: c.block,
            }))
        }
        Game::G2 => {
            let x = q.x.ok_or_else(|| ApiError::bad_request("g2 needs `x`"))?;
            let position = WeightedPosition::new(x, q.y.unwrap_or(0)).map_err(invalid)?;
            let c = classify_g2(position);
            Ok(Json(Classification::G2 {
                game: Game::G2,
                position,
                verdict: c.verdict,
                family: c.family,
            }))
        }
    }
}
