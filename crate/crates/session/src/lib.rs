//! Attack/defend sessions over local HTTP with JSON bodies.
//!
//! | method | path | body |
//! |--------|------|------|
//! | POST | `/sessions` | [`CreateRequest`] |
//! | GET | `/sessions/{id}` | |
//! | DELETE | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/attack` | `{"edge": ["u", "v"]}` |
//! | POST | `/sessions/{id}/defense` | `{"moves": [["from", "to"], ..]}` |
//! | GET | `/sessions/{id}/trace` | |
//!
//! Errors are `{"code", "message", "detail"}` objects.

mod api;
mod session;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use evc_core::game::Budget;

pub use api::{router, AttackBody, DefenseBody, ErrorBody};
pub use session::{
    CreateRequest, DefenderSource, Mode, RoundResult, Session, SessionError, SessionView, Status,
};
pub use store::Store;

/// Serves sessions on `addr` until ctrl-c, writing traces to `dir`.
pub async fn serve(addr: SocketAddr, dir: PathBuf, budget: Budget) -> std::io::Result<()> {
    let store = Arc::new(Store::new(dir, budget)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
