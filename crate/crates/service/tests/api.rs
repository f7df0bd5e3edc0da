use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use euler_core::generators::{generate, Fixture};
use euler_core::Graph;
use euler_service::{router, AppState};

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn graph(f: Fixture) -> Value {
    json!(generate(&f).unwrap())
}

async fn create(app: &Router, f: Fixture, mode: &str) -> (String, Value) {
    let (status, body) = call(app, "POST", "/api/session", Some(json!({ "graph": graph(f), "mode": mode }))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    (body["id"].as_str().unwrap().to_string(), body["state"].clone())
}

fn odd(state: &Value) -> Vec<u64> {
    state["oddVertices"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect()
}

async fn consistent(app: &Router, id: &str) {
    let (status, body) = call(app, "GET", &format!("/api/session/{id}/consistency"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["consistent"], true);
}

#[tokio::test]
async fn create_reports_initial_state() {
    let app = router(AppState::new());
    let (id, state) = create(&app, Fixture::Icosahedron, "closed").await;
    assert_eq!(id.len(), 32);
    assert!(id.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(odd(&state).len(), 12);
    assert_eq!(state["won"], false);
    assert_eq!(state["legalEdgeCount"], 30);
    assert!(state.get("boundaryMod3").is_none());

    let (_, oct) = create(&app, Fixture::Octahedron, "closed").await;
    assert_eq!(oct["won"], true);

    let (_, w10) = create(&app, Fixture::Wheel(10), "ball").await;
    assert_eq!(w10["boundaryMod3"], 1);
    assert_eq!(w10["legalEdgeCount"], 10);

    let (status, shown) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(shown, state);
}

#[tokio::test]
async fn create_rejects_bad_input() {
    let app = router(AppState::new());
    let (status, body) = call(&app, "POST", "/api/session", Some(json!({ "graph": {"vertices": [1], "edges": [[1, 2]]}, "mode": "closed" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    let (status, _) = call(&app, "POST", "/api/session", Some(json!({ "mode": "closed" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/api/session", Some(json!({ "graph": graph(Fixture::Octahedron), "mode": "sideways" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = call(&app, "POST", "/api/session", Some(json!({ "graph": graph(Fixture::Octahedron), "mode": "ball" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    let (status, _) = call(&app, "POST", "/api/session", Some(json!({ "graph": graph(Fixture::Annulus(6)), "mode": "ball" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn move_flips_the_dual_sphere() {
    let app = router(AppState::new());
    let (id, _) = create(&app, Fixture::Icosahedron, "closed").await;
    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [2, 1] }))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let delta = &body["delta"];
    assert_eq!(delta["refinedEdge"], json!([1, 2]));
    assert_eq!(delta["newVertex"], 13);
    assert_eq!(delta["flipped"], json!([5, 6]));
    let g: Graph = serde_json::from_value(body["state"]["graph"].clone()).unwrap();
    assert_eq!(g.degree(13).unwrap(), 4);
    assert_eq!(odd(&body["state"]).len(), 10);
    assert_eq!(body["state"]["moveCount"], 1);
    consistent(&app, &id).await;

    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [1, 2] }))).await;
    assert_eq!(status, StatusCode::GONE);
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [1, 7] }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": "x" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/api/session/0123/move", Some(json!({ "edge": [1, 3] }))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn ball_mode_rejects_boundary_edges() {
    let app = router(AppState::new());
    let (id, _) = create(&app, Fixture::Wheel(9), "ball").await;
    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [1, 2] }))).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [0, 2] }))).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn undo_restores_previous_states() {
    let app = router(AppState::new());
    let (id, initial) = create(&app, Fixture::Icosahedron, "closed").await;
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let mut states = vec![initial.clone()];
    for e in [[1, 2], [1, 13], [3, 4]] {
        let (status, body) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": e }))).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        states.push(body["state"].clone());
    }
    states.pop();
    while let Some(expected) = states.pop() {
        let (status, body) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["state"], expected);
        consistent(&app, &id).await;
    }
    let (_, now) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(now, initial);
}

#[tokio::test]
async fn hints_play_the_icosahedron_to_a_win() {
    let app = router(AppState::new());
    let (id, _) = create(&app, Fixture::Icosahedron, "closed").await;
    let mut won = false;
    for _ in 0..500 {
        let (status, first) = call(&app, "GET", &format!("/api/session/{id}/hint"), None).await;
        assert_eq!(status, StatusCode::OK, "{first}");
        let (_, second) = call(&app, "GET", &format!("/api/session/{id}/hint"), None).await;
        assert_eq!(first, second);
        let (status, body) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": first["edge"] }))).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        assert!(body["state"]["won"] == false || odd(&body["state"]).is_empty());
        if body["state"]["won"] == true {
            won = true;
            break;
        }
    }
    assert!(won);
    consistent(&app, &id).await;
    let (status, _) = call(&app, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [1, 3] }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (_, a) = call(&app, "GET", &format!("/api/session/{id}/analysis"), None).await;
    assert_eq!(a["oddVertices"], json!([]));
    assert!(!a["components"]["components"].as_array().unwrap().is_empty());
    assert_eq!(a["curvature"]["total"], "2");
}

#[tokio::test]
async fn ball_hints() {
    let app = router(AppState::new());
    let (id, _) = create(&app, Fixture::Wheel(10), "ball").await;
    let (status, body) = call(&app, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("unwinnable"));

    let (id, _) = create(&app, Fixture::Wheel(12), "ball").await;
    for _ in 0..500 {
        let (status, h) = call(&app, "GET", &format!("/api/session/{id}/hint"), None).await;
        if status == StatusCode::CONFLICT {
            break;
        }
        assert_eq!(status, StatusCode::OK, "{h}");
        let (status, body) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": h["edge"] }))).await;
        assert_eq!(status, StatusCode::OK, "{body}");
    }
    let (_, state) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(state["won"], true);
    assert_eq!(state["boundaryMod3"], 0);
}

#[tokio::test]
async fn analysis_without_flow() {
    let app = router(AppState::new());
    let (id, _) = create(&app, Fixture::Icosahedron, "closed").await;
    let (status, a) = call(&app, "GET", &format!("/api/session/{id}/analysis"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(a["components"], Value::Null);
    assert_eq!(a["surfaceType"], "Closed2Graph");
    assert_eq!(a["eulerCharacteristic"], 2);
}

#[tokio::test]
async fn snapshots_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::with_snapshots(dir.path()).unwrap());
    let (id, _) = create(&app, Fixture::Icosahedron, "closed").await;
    let (_, moved) = call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": [1, 2] }))).await;

    let reloaded = AppState::with_snapshots(dir.path()).unwrap();
    assert_eq!(reloaded.session_count(), 1);
    let app = router(reloaded);
    let (status, state) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state, moved["state"]);
    consistent(&app, &id).await;
}

#[tokio::test]
async fn sessions_run_in_parallel() {
    let app = router(AppState::new());
    let mut ids = Vec::new();
    for _ in 0..4 {
        ids.push(create(&app, Fixture::Icosahedron, "closed").await.0);
    }
    let mut tasks = Vec::new();
    for id in ids.clone() {
        for e in [[1, 2], [3, 4], [7, 8]] {
            let app = app.clone();
            let id = id.clone();
            tasks.push(tokio::spawn(async move {
                call(&app, "POST", &format!("/api/session/{id}/move"), Some(json!({ "edge": e }))).await.0
            }));
        }
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    for id in ids {
        let (_, s) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
        assert_eq!(s["moveCount"], 3);
        consistent(&app, &id).await;
    }
}
