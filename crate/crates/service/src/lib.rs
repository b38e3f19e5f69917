//! HTTP facade over the evirank engine: scenario storage, value-system
//! patches, procedure runs and cached results.

pub mod api;
pub mod error;
pub mod run;
pub mod store;

use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

pub use api::router;
pub use error::ApiError;
pub use store::Store;

/// Serves the API until the process is stopped.
pub async fn serve(addr: SocketAddr, data_dir: Option<&Path>) -> std::io::Result<()> {
    let store = match data_dir {
        Some(d) => Store::open(d).map_err(|e| std::io::Error::other(format!("{}: {}", e.code, e.message)))?,
        None => Store::in_memory(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(store))).await
}
