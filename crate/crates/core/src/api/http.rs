use std::path::{Component, Path};
use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, Request, StatusCode};
use axum::response::IntoResponse;
use axum::Router;

use super::{handle, ApiConfig, Response};
use crate::node::Node;

#[derive(Clone)]
struct AppState {
    node: Arc<Node>,
    cfg: Arc<ApiConfig>,
}

pub fn router(node: Arc<Node>, cfg: ApiConfig) -> Router {
    Router::new().fallback(dispatch).with_state(AppState { node, cfg: Arc::new(cfg) })
}

/// Binds `cfg.listen` and serves until the process exits.
pub async fn serve(node: Arc<Node>, cfg: ApiConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(&cfg.listen).await?;
    serve_on(listener, node, cfg).await
}

/// Serves on an already bound listener.
pub async fn serve_on(listener: tokio::net::TcpListener, node: Arc<Node>, cfg: ApiConfig) -> std::io::Result<()> {
    axum::serve(listener, router(node, cfg)).await
}

fn static_file(dir: &Path, rel: &str) -> Response {
    let rel = if rel.is_empty() { "index.html" } else { rel };
    let p = Path::new(rel);
    if p.components().any(|c| !matches!(c, Component::Normal(_))) {
        return Response::error(400, "BadRequest", "bad path");
    }
    let content_type = match p.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        _ => "application/octet-stream",
    };
    match std::fs::read(dir.join(p)) {
        Ok(body) => Response { status: 200, content_type, body },
        Err(_) => Response::error(404, "NotFound", format!("no file {rel}")),
    }
}

async fn dispatch(State(app): State<AppState>, req: Request<Body>) -> axum::response::Response {
    let method = req.method().clone();
    let path = req.uri().path().to_string();
    let query = req.uri().query().unwrap_or("").to_string();
    let origin = req.headers().get(header::ORIGIN).cloned();
    let body: Bytes = match axum::body::to_bytes(req.into_body(), 4 << 20).await {
        Ok(b) => b,
        Err(_) => Bytes::new(),
    };
    let resp = if method == Method::OPTIONS {
        Response { status: 204, content_type: "text/plain", body: Vec::new() }
    } else if method == Method::GET && (path == "/" || path == "/ui" || path.starts_with("/ui/")) {
        match &app.cfg.static_dir {
            Some(dir) => static_file(dir, path.trim_start_matches("/ui").trim_start_matches('/')),
            None => Response::error(404, "NotFound", "no static directory configured"),
        }
    } else {
        let node = app.node.clone();
        let cfg = app.cfg.clone();
        let m = method.as_str().to_string();
        tokio::task::spawn_blocking(move || handle(&node, &cfg, &m, &path, &query, &body))
            .await
            .unwrap_or_else(|_| Response::error(500, "Internal", "handler panicked"))
    };
    let mut out = (StatusCode::from_u16(resp.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR), resp.body).into_response();
    let h = out.headers_mut();
    h.insert(header::CONTENT_TYPE, HeaderValue::from_static(resp.content_type));
    if let Some(o) = origin {
        let allowed = app.cfg.cors.iter().any(|c| c == "*" || o.as_bytes() == c.as_bytes());
        if allowed {
            h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, o);
            h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, OPTIONS"));
            h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("content-type"));
        }
    }
    out
}
