//! Feed documents: format detection and normalization of RSS 2.0 and
//! Atom 0.3 sources into a single [`FeedDocument`] shape.

mod credentials;
mod date;
mod decode;
mod parse;

pub use credentials::{Credential, CredentialError, CredentialStore};
pub use decode::decode_document;
pub use parse::{detect_format, parse_feed, parse_feed_at, ATOM03_NS};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

use crate::text::tokenize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeedError {
    #[error("unrecognized feed format: root element <{root}>{}", namespace.as_deref().map(|ns| format!(" in namespace {ns}")).unwrap_or_default())]
    UnknownFormat {
        root: String,
        namespace: Option<String>,
    },
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("feed has no channel title")]
    MissingChannelTitle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedFormat {
    Rss2,
    Atom03,
}

/// A publication date as found in the source, plus its UTC value when the
/// string could be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubDate {
    pub raw: String,
    pub parsed: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelMeta {
    pub title: String,
    pub link: Option<Url>,
    pub language: Option<String>,
    pub pub_date: Option<PubDate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "FeedItemRepr")]
pub struct FeedItem {
    /// 1-based position among the kept items.
    pub index: usize,
    pub title: String,
    pub link: Option<Url>,
    pub description: Option<String>,
    pub pub_date: Option<PubDate>,
    /// `tokenize(title)`; recomputed on deserialization.
    pub tokens: Vec<String>,
}

impl FeedItem {
    pub fn new(
        index: usize,
        title: impl Into<String>,
        link: Option<Url>,
        description: Option<String>,
        pub_date: Option<PubDate>,
    ) -> Self {
        let title = title.into();
        let tokens = tokenize(&title);
        Self {
            index,
            title,
            link,
            description,
            pub_date,
            tokens,
        }
    }
}

#[derive(Deserialize)]
struct FeedItemRepr {
    index: usize,
    title: String,
    link: Option<Url>,
    description: Option<String>,
    pub_date: Option<PubDate>,
}

impl From<FeedItemRepr> for FeedItem {
    fn from(r: FeedItemRepr) -> Self {
        FeedItem::new(r.index, r.title, r.link, r.description, r.pub_date)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedDocument {
    pub source_url: Url,
    pub format: FeedFormat,
    pub channel: ChannelMeta,
    pub items: Vec<FeedItem>,
    pub fetched_at: DateTime<Utc>,
}

impl FeedDocument {
    /// Detects the format of `body` and parses it.
    pub fn from_bytes(body: &[u8], source_url: &Url) -> Result<Self, FeedError> {
        let format = detect_format(body)?;
        parse_feed(body, format, source_url)
    }

    pub fn item(&self, index: usize) -> Option<&FeedItem> {
        index.checked_sub(1).and_then(|i| self.items.get(i))
    }
}
