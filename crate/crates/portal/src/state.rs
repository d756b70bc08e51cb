//! The on-disk portal state: subscriptions, credentials and dialog-path
//! history. Live sessions are not persisted.
//!
//! The file holds credentials in plain text and is written with mode 0600.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use url::Url;
use voxfeed_core::dialog::PathRecord;
use voxfeed_core::feed::CredentialStore;
use voxfeed_core::FeedDocument;

pub const STATE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("cannot access state file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt state file {path}: {reason}")]
    CorruptState { path: PathBuf, reason: String },
}

/// Lowercase hex SHA-256 of the URL's canonical (parsed) form.
pub fn feed_id_for(url: &Url) -> String {
    hex::encode(Sha256::digest(url.as_str().as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedSubscription {
    pub feed_id: String,
    pub url: Url,
    pub last_document: Option<FeedDocument>,
    pub last_error: Option<String>,
    pub refreshed_at: Option<DateTime<Utc>>,
}

impl FeedSubscription {
    pub fn new(url: Url) -> Self {
        Self {
            feed_id: feed_id_for(&url),
            url,
            last_document: None,
            last_error: None,
            refreshed_at: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistedState {
    pub version: u32,
    pub subscriptions: Vec<FeedSubscription>,
    pub credentials: CredentialStore,
    pub history: BTreeMap<String, Vec<PathRecord>>,
}

impl PersistedState {
    pub fn new() -> Self {
        Self {
            version: STATE_VERSION,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.version != STATE_VERSION {
            return Err(format!("unsupported version {} (expected {STATE_VERSION})", self.version));
        }
        let mut ids = std::collections::HashSet::new();
        for s in &self.subscriptions {
            if s.feed_id != feed_id_for(&s.url) {
                return Err(format!("feed id {} does not match url {}", s.feed_id, s.url));
            }
            if !ids.insert(s.feed_id.as_str()) {
                return Err(format!("duplicate subscription {}", s.url));
            }
        }
        if let Some(orphan) = self.history.keys().find(|k| !ids.contains(k.as_str())) {
            return Err(format!("history for unknown feed {orphan}"));
        }
        Ok(())
    }
}

/// Writes `state` atomically: a sibling temp file is written, synced and
/// renamed over `path`.
pub fn persist_state(state: &PersistedState, path: &Path) -> Result<(), StateError> {
    let io = |source| StateError::Io {
        path: path.to_path_buf(),
        source,
    };
    let json = serde_json::to_vec_pretty(state).expect("state serializes");
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let _ = fs::remove_file(&tmp);

    let mut options = fs::OpenOptions::new();
    options.write(true).create_new(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::OpenOptionsExt;
        options.mode(0o600);
    }
    let mut file = options.open(&tmp).map_err(io)?;
    file.write_all(&json).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io)
}

pub fn load_state(path: &Path) -> Result<PersistedState, StateError> {
    let bytes = fs::read(path).map_err(|source| StateError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&bytes).map_err(|reason| StateError::CorruptState {
        path: path.to_path_buf(),
        reason,
    })
}

/// Decodes and validates a state document.
pub fn parse_state(bytes: &[u8]) -> Result<PersistedState, String> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    match value.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(STATE_VERSION) => {}
        Some(v) => return Err(format!("unsupported version {v} (expected {STATE_VERSION})")),
        None => return Err("missing version".into()),
    }
    let state: PersistedState = serde_json::from_value(value).map_err(|e| e.to_string())?;
    state.validate()?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feed_id_is_stable_hex() {
        let a = feed_id_for(&Url::parse("http://Example.com/feed").unwrap());
        let b = feed_id_for(&Url::parse("http://example.com/feed").unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        assert!(a.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        assert!(parse_state(br#"{"version":2,"subscriptions":[],"credentials":[],"history":{}}"#)
            .unwrap_err()
            .contains("version 2"));
        assert!(parse_state(b"{").is_err());
        assert!(parse_state(b"[]").is_err());
        assert!(parse_state(br#"{"version":1,"subscriptions":[],"credentials":[],"history":{"x":[]}}"#).is_err());
        assert_eq!(
            parse_state(br#"{"version":1,"subscriptions":[],"credentials":[],"history":{}}"#).unwrap(),
            PersistedState::new()
        );
    }
}
