//! `voxfeed serve`: the portal over HTTP, with state loaded at start and
//! persisted on a clean shutdown.

use std::future::Future;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use voxfeed_portal::{api, load_state, persist_state, FetchConfig, PersistedState, Portal, PortalConfig};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub bind: IpAddr,
    pub port: u16,
    pub state_file: PathBuf,
    pub ui_dir: Option<PathBuf>,
    pub postback_url: Option<String>,
    pub fetch: FetchConfig,
}

/// A missing state file is a fresh start; anything unreadable is an error.
fn initial_state(path: &std::path::Path) -> Result<PersistedState, CliError> {
    if !path.exists() {
        tracing::info!(path = %path.display(), "no state file, starting fresh");
        return Ok(PersistedState::new());
    }
    Ok(load_state(path)?)
}

pub fn run(opts: ServeOptions) -> Result<(), CliError> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(run_until(opts, shutdown_signal()))
}

pub async fn run_until(opts: ServeOptions, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), CliError> {
    let state = initial_state(&opts.state_file)?;
    let mut config = PortalConfig {
        fetch: opts.fetch,
        ..PortalConfig::default()
    };
    if let Some(postback) = opts.postback_url {
        config.postback_url = postback;
    }
    let portal = Arc::new(Portal::from_state(state, config)?);

    let addr = SocketAddr::new(opts.bind, opts.port);
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|source| CliError::Bind {
        addr: addr.to_string(),
        source,
    })?;
    let local = listener.local_addr()?;
    eprintln!("listening on http://{local}");

    api::serve(listener, portal.clone(), opts.ui_dir, shutdown).await?;
    persist_state(&portal.snapshot(), &opts.state_file)?;
    tracing::info!(path = %opts.state_file.display(), "state saved");
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        if tokio::signal::ctrl_c().await.is_err() {
            std::future::pending::<()>().await;
        }
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
    tracing::info!("shutting down");
}
