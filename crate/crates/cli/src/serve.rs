//! Static HTTP server for a tile directory. Absent tiles are 404, which the
//! viewer reads as empty.

use std::io;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;

use crate::{CliError, ServeArgs};

fn json_file(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

async fn read_or_404(path: PathBuf) -> Response {
    match tokio::fs::read(&path).await {
        Ok(bytes) => json_file(bytes),
        Err(e) if e.kind() == io::ErrorKind::NotFound => StatusCode::NOT_FOUND.into_response(),
        Err(_) => StatusCode::INTERNAL_SERVER_ERROR.into_response(),
    }
}

async fn manifest(State(dir): State<Arc<PathBuf>>) -> Response {
    read_or_404(dir.join("manifest.json")).await
}

async fn tile(State(dir): State<Arc<PathBuf>>, Path((z, x, file)): Path<(String, String, String)>) -> Response {
    // Only plain decimal indices reach the filesystem.
    let y = file.strip_suffix(".json").unwrap_or("");
    let parsed = (z.parse::<u32>(), x.parse::<u32>(), y.parse::<u32>());
    let (Ok(z), Ok(x), Ok(y)) = parsed else {
        return StatusCode::NOT_FOUND.into_response();
    };
    read_or_404(dir.join("tiles").join(z.to_string()).join(x.to_string()).join(format!("{y}.json"))).await
}

pub fn router(dir: PathBuf) -> Router {
    Router::new()
        .route("/manifest.json", get(manifest))
        .route("/tiles/{z}/{x}/{file}", get(tile))
        .with_state(Arc::new(dir))
        .layer(axum::middleware::map_response(|mut res: Response| async move {
            res.headers_mut()
                .insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
            res
        }))
}

pub fn run(args: ServeArgs) -> Result<(), CliError> {
    if !args.dir.join("manifest.json").is_file() {
        return Err(tilegraph_core::tiler::output::OutputError::Missing {
            path: args.dir.join("manifest.json"),
        }
        .into());
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Other(e.to_string()))?;
    runtime.block_on(async move {
        let listener = match tokio::net::TcpListener::bind((args.host.as_str(), args.port)).await {
            Ok(l) => l,
            Err(e) if e.kind() == io::ErrorKind::AddrInUse => return Err(CliError::PortInUse(args.port)),
            Err(e) => return Err(CliError::Other(format!("binding port {}: {e}", args.port))),
        };
        let addr = listener.local_addr().map_err(|e| CliError::Other(e.to_string()))?;
        println!("serving {} on http://{addr}", args.dir.display());
        axum::serve(listener, router(args.dir))
            .await
            .map_err(|e| CliError::Other(e.to_string()))
    })
}
