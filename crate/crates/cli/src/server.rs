//! `POST /resolve` and `GET /healthz` over a shared, read-only gazetteer.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use toporesolve::corpus::{CorpusError, RawMention};
use toporesolve::report::{resolve_corpus, ResolutionReport};
use toporesolve::{Document, Gazetteer, ResolveOptions, ResolverKind};

use crate::args::ServeArgs;
use crate::commands::load_gazetteer;
use crate::error::CliError;

pub const DEFAULT_DOC_ID: &str = "request";

pub struct AppState {
    pub gazetteer: Gazetteer,
    pub defaults: ResolveOptions,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolveRequest {
    #[serde(default)]
    pub doc_id: Option<String>,
    pub text: String,
    #[serde(default)]
    pub toponyms: Vec<RawMention>,
    #[serde(default)]
    pub resolver: Option<ResolverKind>,
    #[serde(default)]
    pub tau: Option<f64>,
}

pub fn router(state: Arc<AppState>, max_body_bytes: usize) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/resolve", post(resolve))
        .layer(DefaultBodyLimit::max(max_body_bytes))
        .with_state(state)
}

async fn healthz(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "entries": state.gazetteer.len() }))
}

fn bad_request(path: &str, message: impl ToString) -> Response {
    (StatusCode::BAD_REQUEST, Json(json!({ "error": message.to_string(), "path": path }))).into_response()
}

async fn resolve(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let mut de = serde_json::Deserializer::from_slice(&body);
    let req: ResolveRequest = match serde_path_to_error::deserialize(&mut de) {
        Ok(r) => r,
        Err(e) => return bad_request(&e.path().to_string(), e.into_inner()),
    };
    let mut opts = state.defaults.clone();
    if let Some(r) = req.resolver {
        opts.resolver = r;
    }
    if let Some(tau) = req.tau {
        if !(0.0..=1.0).contains(&tau) {
            return bad_request("tau", format!("must lie in [0, 1], got {tau}"));
        }
        opts.chf.tau = tau;
    }
    let doc_id = req.doc_id.unwrap_or_else(|| DEFAULT_DOC_ID.to_string());
    let doc = match Document::new(doc_id, req.text, req.toponyms) {
        Ok(d) => d,
        Err(CorpusError::Schema { path, message }) => return bad_request(&path, message),
        Err(e) => return bad_request("", e),
    };
    let worker = Arc::clone(&state);
    let report: ResolutionReport =
        match tokio::task::spawn_blocking(move || resolve_corpus(&[doc], &worker.gazetteer, &opts)).await {
            Ok(r) => r,
            Err(e) => return (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
        };
    ([(header::CONTENT_TYPE, "application/json")], report.to_json()).into_response()
}

pub fn serve(args: ServeArgs) -> Result<(), CliError> {
    let defaults = args.resolver.options().map_err(CliError::Usage)?;
    let gazetteer = load_gazetteer(&args.gazetteer)?;
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Failure(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(args.listen)
            .await
            .map_err(|e| CliError::Usage(format!("cannot listen on {}: {e}", args.listen)))?;
        tracing::info!(addr = %args.listen, entries = gazetteer.len(), "serving");
        let app = router(Arc::new(AppState { gazetteer, defaults }), args.max_body_bytes);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::Failure(e.to_string()))
    })
}
