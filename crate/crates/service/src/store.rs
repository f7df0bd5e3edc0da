use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State as Extract};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::Deserialize;
use serde_json::{json, Value};

use euler_core::{Graph, Vertex};

use crate::error::ServiceError;
use crate::session::{analysis, hint, Mode, Session};

type Shared = Arc<Mutex<Session>>;

/// Sessions by id. Each session has its own lock.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    snapshot_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new() -> AppState {
        AppState::default()
    }

    /// Keeps a JSON snapshot of every session in `dir` and loads the ones
    /// already there.
    pub fn with_snapshots(dir: &Path) -> std::io::Result<AppState> {
        std::fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = std::fs::read_to_string(&path)?;
                match serde_json::from_str::<Session>(&text) {
                    Ok(s) => {
                        sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => tracing::warn!("skipping snapshot {}: {e}", path.display()),
                }
            }
        }
        Ok(AppState {
            sessions: Arc::new(RwLock::new(sessions)),
            snapshot_dir: Some(dir.to_path_buf()),
        })
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().len()
    }

    fn get(&self, id: &str) -> Result<Shared, ServiceError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    fn persist(&self, s: &Session) -> Result<(), ServiceError> {
        let Some(dir) = &self.snapshot_dir else { return Ok(()) };
        let io = |e: std::io::Error| ServiceError::Internal(format!("snapshot: {e}"));
        let tmp = dir.join(format!("{}.json.tmp", s.id));
        let body = serde_json::to_vec(s).map_err(|e| ServiceError::Internal(e.to_string()))?;
        std::fs::write(&tmp, body).map_err(io)?;
        std::fs::rename(&tmp, dir.join(format!("{}.json", s.id))).map_err(io)
    }
}

fn new_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

fn parse<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

#[derive(Deserialize)]
struct CreateBody {
    graph: Value,
    mode: Mode,
}

#[derive(Deserialize)]
struct MoveBody {
    edge: [Vertex; 2],
}

async fn create(Extract(app): Extract<AppState>, body: Bytes) -> Result<Json<Value>, ServiceError> {
    let req: CreateBody = parse(&body)?;
    let graph: Graph = serde_json::from_value(req.graph).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    let session = Session::new(new_id(), graph, req.mode)?;
    app.persist(&session)?;
    let state = session.state();
    app.sessions.write().insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok(Json(json!({ "id": state.id, "state": state })))
}

async fn show(Extract(app): Extract<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let state = s.lock().state();
    Ok(Json(json!(state)))
}

async fn apply(
    Extract(app): Extract<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let req: MoveBody = parse(&body)?;
    let mut s = s.lock();
    let delta = s.apply_move((req.edge[0], req.edge[1]))?;
    app.persist(&s)?;
    Ok(Json(json!({ "state": s.state(), "delta": delta })))
}

async fn undo(Extract(app): Extract<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let mut s = s.lock();
    let undone = s.undo()?;
    app.persist(&s)?;
    Ok(Json(json!({ "state": s.state(), "undone": undone })))
}

async fn suggest(Extract(app): Extract<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let (g, mode, boundary) = {
        let s = s.lock();
        (s.current.clone(), s.mode, s.boundary.clone())
    };
    let h = tokio::task::spawn_blocking(move || hint(&g, mode, &boundary))
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))??;
    Ok(Json(json!(h)))
}

async fn analyze(Extract(app): Extract<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let g = s.lock().current.clone();
    let a = tokio::task::spawn_blocking(move || analysis(&g))
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?;
    Ok(Json(json!(a)))
}

async fn consistency(Extract(app): Extract<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ServiceError> {
    let s = app.get(&id)?;
    let s = s.lock();
    let state = s.state();
    Ok(Json(json!({
        "consistent": s.consistent() && state.won == state.odd_vertices.is_empty(),
        "moveCount": state.move_count,
    })))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}", get(show))
        .route("/api/session/{id}/move", post(apply))
        .route("/api/session/{id}/undo", post(undo))
        .route("/api/session/{id}/hint", get(suggest))
        .route("/api/session/{id}/analysis", get(analyze))
        .route("/api/session/{id}/consistency", get(consistency))
        .with_state(app)
}

/// Serves the API on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, app: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(app)).await
}
