//! The `voxfeed` command line: fetch, render, a text navigator standing in
//! for the voice channel, and the portal service.
//!
//! Every failure is a [`CliError`] whose [`CliError::exit_code`] is pinned:
//! network 10, auth 11, parse 12, bad format 13, bind 20.

pub mod repl;
pub mod serve;

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;
use url::Url;
use voxfeed_core::dialog::{DialogError, ROOT_ID};
use voxfeed_core::feed::{Credential, CredentialStore, FeedError};
use voxfeed_core::render::{
    encode_jsgf, render_voicexml, render_xhtml_voice, serialize_jsgf, RenderError, RenderOptions,
};
use voxfeed_core::{DialogTree, FeedDocument, ShortcutIndex};
use voxfeed_portal::{FetchConfig, FetchError, Fetcher, StateError};

pub use repl::{Repl, TraceStep};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Network(String),
    #[error("{0}")]
    Auth(String),
    #[error("{0}")]
    Parse(String),
    #[error("unknown format {0:?} (expected vxml, xv or jsgf)")]
    BadFormat(String),
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error(transparent)]
    State(#[from] StateError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Network(_) => 10,
            CliError::Auth(_) => 11,
            CliError::Parse(_) => 12,
            CliError::BadFormat(_) => 13,
            CliError::Bind { .. } => 20,
            CliError::State(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<FetchError> for CliError {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::AuthRequired { .. } | FetchError::Http { status: 401 | 403, .. } => CliError::Auth(e.to_string()),
            FetchError::UnsupportedScheme(_) => CliError::Usage(e.to_string()),
            _ => CliError::Network(e.to_string()),
        }
    }
}

impl From<FeedError> for CliError {
    fn from(e: FeedError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<DialogError> for CliError {
    fn from(e: DialogError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        CliError::Parse(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Vxml,
    Xv,
    Jsgf,
}

impl FromStr for RenderFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vxml" => Ok(RenderFormat::Vxml),
            "xv" => Ok(RenderFormat::Xv),
            "jsgf" => Ok(RenderFormat::Jsgf),
            other => Err(CliError::BadFormat(other.to_string())),
        }
    }
}

/// Where a feed comes from, validated before anything touches the network.
#[derive(Debug, Clone)]
pub struct FeedSource {
    pub url: Url,
    pub credentials: CredentialStore,
}

impl FeedSource {
    /// Accepts http(s) and file URLs, or a plain filesystem path. A user
    /// without a password means an empty password; a password without a
    /// user is a usage error.
    pub fn new(location: &str, user: Option<&str>, pass: Option<&str>) -> Result<Self, CliError> {
        let url = match Url::parse(location) {
            Ok(url) => url,
            Err(url::ParseError::RelativeUrlWithoutBase) => {
                let path = std::path::absolute(location)?;
                Url::from_file_path(&path).map_err(|_| CliError::Usage(format!("not a usable path: {location}")))?
            }
            Err(e) => return Err(CliError::Usage(format!("invalid URL {location:?}: {e}"))),
        };
        match url.scheme() {
            "http" | "https" | "file" => {}
            other => return Err(CliError::Usage(format!("unsupported URL scheme {other:?}"))),
        }
        if !url.username().is_empty() || url.password().is_some() {
            return Err(CliError::Usage("put credentials in --user/--pass, not in the URL".into()));
        }
        let mut credentials = CredentialStore::new();
        match (user, pass) {
            (None, None) => {}
            (None, Some(_)) => return Err(CliError::Usage("--pass given without --user".into())),
            (Some(u), p) => {
                let credential = Credential::new(url.origin().ascii_serialization(), u, p.unwrap_or(""))
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                credentials.upsert(credential);
            }
        }
        Ok(Self { url, credentials })
    }

    /// Retrieves and parses the feed.
    pub fn load(&self, config: FetchConfig) -> Result<FeedDocument, CliError> {
        if self.url.scheme() == "file" {
            let path = self
                .url
                .to_file_path()
                .map_err(|_| CliError::Usage(format!("not a local file: {}", self.url)))?;
            return load_file(&path, &self.url);
        }
        let fetcher = Fetcher::new(config)?;
        let runtime = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
        let raw = runtime.block_on(fetcher.fetch(&self.url, &self.credentials))?;
        tracing::debug!(status = raw.status, bytes = raw.body.len(), url = %raw.final_url, "fetched");
        Ok(FeedDocument::from_bytes(&raw.body, &self.url)?)
    }
}

fn load_file(path: &Path, url: &Url) -> Result<FeedDocument, CliError> {
    let body = std::fs::read(path).map_err(|e| CliError::Network(format!("cannot read {}: {e}", path.display())))?;
    Ok(FeedDocument::from_bytes(&body, url)?)
}

/// The normalized document as pretty JSON, newline-terminated.
pub fn fetch_output(doc: &FeedDocument) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("feed documents always serialize");
    out.push(b'\n');
    out
}

/// Compiles a feed for dialog use; an empty feed is a parse failure here.
pub fn compile(doc: FeedDocument) -> Result<(DialogTree, ShortcutIndex), CliError> {
    let index = ShortcutIndex::build(&doc)?;
    let tree = DialogTree::build(Arc::new(doc))?;
    Ok((tree, index))
}

/// Exactly the bytes the renderers produce: the XML documents in their
/// declared encoding, the grammar as Latin-1 with `\u` escapes.
pub fn render_output(tree: &DialogTree, format: RenderFormat, node: Option<&str>) -> Result<Vec<u8>, CliError> {
    let node = node.unwrap_or(ROOT_ID);
    Ok(match format {
        RenderFormat::Vxml => render_voicexml(tree, node, &RenderOptions::default())?.to_bytes(),
        RenderFormat::Xv => render_xhtml_voice(tree, node)?.to_bytes(),
        RenderFormat::Jsgf => encode_jsgf(&serialize_jsgf(tree.grammar())?),
    })
}
