use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::Serialize;
use thiserror::Error;
use url::Url;
use voxfeed_core::dialog::{
    advance, assign_history_shortcuts, rank_paths, record_path, DialogAction, DialogInput, HistoryShortcut,
    PathRecord, ScoredItem, Session, SubscribedUrls, TurnContext, ROOT_ID,
};
use voxfeed_core::feed::{Credential, CredentialStore};
use voxfeed_core::render::{render_voicexml, render_xhtml_voice, RenderOptions, RenderedDocument};
use voxfeed_core::{DialogTree, FeedDocument, ShortcutIndex};

use crate::fetch::{FetchConfig, FetchError, Fetcher};
use crate::state::{feed_id_for, FeedSubscription, PersistedState, STATE_VERSION};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PortalError {
    #[error("invalid feed URL: {0}")]
    InvalidUrl(String),
    #[error("invalid credentials: {0}")]
    InvalidCredentials(String),
    #[error("already subscribed to {0}")]
    DuplicateSubscription(String),
    #[error("unknown feed {0}")]
    UnknownFeed(String),
    #[error("feed {feed_id} has no usable document: {reason}")]
    FeedNotLoaded { feed_id: String, reason: String },
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("unsupported dialog format {0:?} (expected vxml or xv)")]
    BadFormat(String),
    #[error("refreshing {} failed: {}", .0.url, .0.last_error.as_deref().unwrap_or("unknown error"))]
    UpstreamFailure(Box<FeedSummary>),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PortalError {
    /// Stable machine-readable code for API bodies.
    pub fn code(&self) -> &'static str {
        match self {
            PortalError::InvalidUrl(_) => "invalid_url",
            PortalError::InvalidCredentials(_) => "invalid_credentials",
            PortalError::DuplicateSubscription(_) => "duplicate_subscription",
            PortalError::UnknownFeed(_) => "unknown_feed",
            PortalError::FeedNotLoaded { .. } => "feed_not_loaded",
            PortalError::UnknownSession(_) => "unknown_session",
            PortalError::MalformedInput(_) => "malformed_input",
            PortalError::BadFormat(_) => "bad_format",
            PortalError::UpstreamFailure(_) => "upstream_failure",
            PortalError::Internal(_) => "internal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PortalConfig {
    pub fetch: FetchConfig,
    /// Submit target of VoiceXML filled handlers; `{node_id}` is replaced.
    pub postback_url: String,
}

impl Default for PortalConfig {
    fn default() -> Self {
        Self {
            fetch: FetchConfig::default(),
            postback_url: RenderOptions::default().postback_url,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeedSummary {
    pub feed_id: String,
    pub url: Url,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refreshed_at: Option<DateTime<Utc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemView {
    pub index: usize,
    pub title: String,
    pub phrase: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub session_id: String,
    pub feed_id: String,
    pub node_id: String,
    pub prompt: String,
    pub turn_count: u64,
    pub items: Vec<ItemView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputOutcome {
    pub action: DialogAction,
    pub node_id: String,
    pub prompt: String,
    pub turn_count: u64,
    /// Full score list for shortcut queries; empty otherwise.
    pub ranked: Vec<ScoredItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistoryView {
    pub ranked: Vec<PathRecord>,
    pub shortcuts: Vec<HistoryShortcut>,
}

/// Dialog structures compiled from one feed document.
struct Compiled {
    tree: DialogTree,
    index: ShortcutIndex,
}

#[derive(Default)]
struct Loaded {
    document: Option<Arc<FeedDocument>>,
    compiled: Option<Arc<Compiled>>,
    last_error: Option<String>,
    refreshed_at: Option<DateTime<Utc>>,
}

impl Loaded {
    fn install(&mut self, document: FeedDocument, at: DateTime<Utc>) {
        let document = Arc::new(document);
        self.compiled = ShortcutIndex::build(&document).ok().map(|index| {
            let tree = DialogTree::build(document.clone()).expect("non-empty feed builds a tree");
            Arc::new(Compiled { tree, index })
        });
        self.document = Some(document);
        self.last_error = None;
        self.refreshed_at = Some(at);
    }
}

struct FeedSlot {
    feed_id: String,
    url: Url,
    loaded: RwLock<Loaded>,
    history: Mutex<Vec<PathRecord>>,
}

impl FeedSlot {
    fn summary(&self) -> FeedSummary {
        let loaded = self.loaded.read().unwrap();
        FeedSummary {
            feed_id: self.feed_id.clone(),
            url: self.url.clone(),
            title: loaded.document.as_ref().map(|d| d.channel.title.clone()),
            refreshed_at: loaded.refreshed_at,
            last_error: loaded.last_error.clone(),
        }
    }

    fn compiled(&self) -> Result<Arc<Compiled>, PortalError> {
        let loaded = self.loaded.read().unwrap();
        loaded.compiled.clone().ok_or_else(|| PortalError::FeedNotLoaded {
            feed_id: self.feed_id.clone(),
            reason: match (&loaded.document, &loaded.last_error) {
                (Some(_), _) => "feed has no items".into(),
                (None, Some(e)) => e.clone(),
                (None, None) => "not fetched yet".into(),
            },
        })
    }
}

/// The portal's shared state. All methods take `&self`; locks are scoped
/// to one feed or one session and never held across a network call.
pub struct Portal {
    config: PortalConfig,
    fetcher: Fetcher,
    credentials: RwLock<CredentialStore>,
    feeds: RwLock<BTreeMap<String, Arc<FeedSlot>>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

impl Portal {
    pub fn new(config: PortalConfig) -> Result<Self, FetchError> {
        Ok(Self {
            fetcher: Fetcher::new(config.fetch.clone())?,
            config,
            credentials: RwLock::default(),
            feeds: RwLock::default(),
            sessions: RwLock::default(),
        })
    }

    /// Restores subscriptions, credentials and history; dialog trees are
    /// rebuilt from the stored documents.
    pub fn from_state(state: PersistedState, config: PortalConfig) -> Result<Self, FetchError> {
        let portal = Self::new(config)?;
        *portal.credentials.write().unwrap() = state.credentials;
        let mut history = state.history;
        let mut feeds = portal.feeds.write().unwrap();
        for sub in state.subscriptions {
            let mut loaded = Loaded::default();
            if let Some(doc) = sub.last_document {
                loaded.install(doc, sub.refreshed_at.unwrap_or_else(Utc::now));
            }
            loaded.refreshed_at = sub.refreshed_at;
            loaded.last_error = sub.last_error;
            let slot = FeedSlot {
                history: Mutex::new(history.remove(&sub.feed_id).unwrap_or_default()),
                feed_id: sub.feed_id.clone(),
                url: sub.url,
                loaded: RwLock::new(loaded),
            };
            feeds.insert(sub.feed_id, Arc::new(slot));
        }
        drop(feeds);
        Ok(portal)
    }

    /// Everything that survives a restart.
    pub fn snapshot(&self) -> PersistedState {
        let feeds = self.feeds.read().unwrap();
        let mut subscriptions = Vec::with_capacity(feeds.len());
        let mut history = BTreeMap::new();
        for slot in feeds.values() {
            let loaded = slot.loaded.read().unwrap();
            subscriptions.push(FeedSubscription {
                feed_id: slot.feed_id.clone(),
                url: slot.url.clone(),
                last_document: loaded.document.as_deref().cloned(),
                last_error: loaded.last_error.clone(),
                refreshed_at: loaded.refreshed_at,
            });
            let h = slot.history.lock().unwrap();
            if !h.is_empty() {
                history.insert(slot.feed_id.clone(), h.clone());
            }
        }
        PersistedState {
            version: STATE_VERSION,
            subscriptions,
            credentials: self.credentials.read().unwrap().clone(),
            history,
        }
    }

    pub fn config(&self) -> &PortalConfig {
        &self.config
    }

    fn slot(&self, feed_id: &str) -> Result<Arc<FeedSlot>, PortalError> {
        self.feeds
            .read()
            .unwrap()
            .get(feed_id)
            .cloned()
            .ok_or_else(|| PortalError::UnknownFeed(feed_id.to_string()))
    }

    fn session(&self, session_id: &str) -> Result<Arc<Mutex<Session>>, PortalError> {
        self.sessions
            .read()
            .unwrap()
            .get(session_id)
            .cloned()
            .ok_or_else(|| PortalError::UnknownSession(session_id.to_string()))
    }

    /// Adds a subscription and fetches it once. A failed fetch keeps the
    /// subscription with `last_error` set.
    pub async fn subscribe_feed(
        &self,
        url: &str,
        credentials: Option<(&str, &str)>,
    ) -> Result<String, PortalError> {
        let url = parse_feed_url(url)?;
        let credential = credentials
            .map(|(user, pass)| {
                Credential::new(url.origin().ascii_serialization(), user, pass)
                    .map_err(|e| PortalError::InvalidCredentials(e.to_string()))
            })
            .transpose()?;
        let feed_id = feed_id_for(&url);
        {
            let mut feeds = self.feeds.write().unwrap();
            if feeds.contains_key(&feed_id) {
                return Err(PortalError::DuplicateSubscription(url.to_string()));
            }
            feeds.insert(
                feed_id.clone(),
                Arc::new(FeedSlot {
                    feed_id: feed_id.clone(),
                    url: url.clone(),
                    loaded: RwLock::default(),
                    history: Mutex::default(),
                }),
            );
        }
        if let Some(c) = credential {
            self.credentials.write().unwrap().upsert(c);
        }
        tracing::info!(%feed_id, %url, "subscribed");
        let _ = self.refresh_feed(&feed_id).await;
        Ok(feed_id)
    }

    /// Re-fetches and re-parses a feed. On success the dialog structures
    /// are swapped in one step, history paths whose item changed are
    /// flagged stale and sessions left on a vanished node return to the
    /// root. On failure the previous document is kept.
    pub async fn refresh_feed(&self, feed_id: &str) -> Result<FeedSummary, PortalError> {
        let slot = self.slot(feed_id)?;
        let store = self.credentials.read().unwrap().clone();
        let result = match self.fetcher.fetch(&slot.url, &store).await {
            Ok(raw) => FeedDocument::from_bytes(&raw.body, &slot.url).map_err(|e| e.to_string()),
            Err(e) => Err(e.to_string()),
        };
        let now = Utc::now();
        let document = match result {
            Ok(doc) => doc,
            Err(message) => {
                tracing::warn!(%feed_id, error = %message, "refresh failed");
                slot.loaded.write().unwrap().last_error = Some(message);
                return Err(PortalError::UpstreamFailure(Box::new(slot.summary())));
            }
        };

        let (previous, old_compiled, compiled) = {
            let mut loaded = slot.loaded.write().unwrap();
            let previous = loaded.document.clone();
            let old_compiled = loaded.compiled.clone();
            loaded.install(document, now);
            (previous, old_compiled, loaded.compiled.clone())
        };
        let current = slot.loaded.read().unwrap().document.clone().expect("just installed");
        let change = Change {
            previous: previous.as_deref(),
            current: &current,
            compiled: compiled.as_deref(),
        };
        change.mark_stale(&mut slot.history.lock().unwrap());

        let sessions: Vec<_> = self.sessions.read().unwrap().values().cloned().collect();
        for s in sessions {
            let mut s = s.lock().unwrap();
            if s.feed_id != feed_id {
                continue;
            }
            change.mark_stale(&mut s.history);
            let old_path = old_compiled.as_ref().and_then(|c| c.tree.node(&s.current_node)).map(|n| n.path.clone());
            if old_path.is_none_or(|p| change.invalidates(&p)) {
                s.current_node = ROOT_ID.to_string();
            }
        }
        tracing::info!(%feed_id, items = current.items.len(), "refreshed");
        Ok(slot.summary())
    }

    pub fn list_feeds(&self) -> Vec<FeedSummary> {
        self.feeds.read().unwrap().values().map(|s| s.summary()).collect()
    }

    pub fn subscription(&self, feed_id: &str) -> Result<FeedSubscription, PortalError> {
        let slot = self.slot(feed_id)?;
        let loaded = slot.loaded.read().unwrap();
        Ok(FeedSubscription {
            feed_id: slot.feed_id.clone(),
            url: slot.url.clone(),
            last_document: loaded.document.as_deref().cloned(),
            last_error: loaded.last_error.clone(),
            refreshed_at: loaded.refreshed_at,
        })
    }

    pub fn create_session(&self, feed_id: &str) -> Result<SessionView, PortalError> {
        let slot = self.slot(feed_id)?;
        let compiled = slot.compiled()?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), feed_id, slot.history.lock().unwrap().clone());
        let view = session_view(&session, &compiled);
        self.sessions.write().unwrap().insert(id.clone(), Arc::new(Mutex::new(session)));
        tracing::info!(%feed_id, session_id = %id, "session created");
        Ok(view)
    }

    pub fn session_view(&self, session_id: &str) -> Result<SessionView, PortalError> {
        let session = self.session(session_id)?;
        let session = session.lock().unwrap();
        let compiled = self.slot(&session.feed_id)?.compiled()?;
        Ok(session_view(&session, &compiled))
    }

    /// Applies one input to a session. Calls on the same session are
    /// serialized; calls on different sessions run independently.
    pub fn post_input(&self, session_id: &str, input: &DialogInput) -> Result<InputOutcome, PortalError> {
        let session = self.session(session_id)?;
        let mut session = session.lock().unwrap();
        let slot = self.slot(&session.feed_id)?;
        let compiled = slot.compiled()?;
        if compiled.tree.node(&session.current_node).is_none() {
            session.current_node = ROOT_ID.to_string();
        }
        let directory: SubscribedUrls = self.feeds.read().unwrap().values().map(|s| s.url.as_str().to_string()).collect();
        let ctx = TurnContext {
            now: Utc::now(),
            directory: &directory,
        };
        let (next, action) = advance(&session, &compiled.tree, &compiled.index, input, &ctx)
            .map_err(|e| PortalError::Internal(e.to_string()))?;
        if !matches!(action, DialogAction::Reject { .. }) {
            let node = compiled.tree.node(&next.current_node).expect("advance lands on a tree node");
            record_path(&mut slot.history.lock().unwrap(), &node.path, ctx.now);
        }
        *session = next;
        let ranked = match input {
            DialogInput::ShortcutQuery(words) => compiled.index.score(words),
            _ => Vec::new(),
        };
        let node = compiled.tree.node(&session.current_node).expect("current node exists");
        Ok(InputOutcome {
            action,
            node_id: node.id.clone(),
            prompt: node.prompt.clone(),
            turn_count: session.turn_count,
            ranked,
        })
    }

    pub fn history(&self, feed_id: &str) -> Result<HistoryView, PortalError> {
        let slot = self.slot(feed_id)?;
        let ranked = rank_paths(&slot.history.lock().unwrap());
        let shortcuts = assign_history_shortcuts(&ranked);
        Ok(HistoryView { ranked, shortcuts })
    }

    /// Renders the feed's root node as `vxml` (VoiceXML) or `xv`
    /// (XHTML+Voice).
    pub fn dialog_document(&self, feed_id: &str, format: &str) -> Result<RenderedDocument, PortalError> {
        if !matches!(format, "vxml" | "xv") {
            return Err(PortalError::BadFormat(format.to_string()));
        }
        let compiled = self.slot(feed_id)?.compiled()?;
        let rendered = if format == "xv" {
            render_xhtml_voice(&compiled.tree, ROOT_ID)
        } else {
            let opts = RenderOptions {
                postback_url: self.config.postback_url.clone(),
            };
            render_voicexml(&compiled.tree, ROOT_ID, &opts)
        };
        rendered.map_err(|e| PortalError::Internal(e.to_string()))
    }
}

fn parse_feed_url(raw: &str) -> Result<Url, PortalError> {
    let url = Url::parse(raw.trim()).map_err(|e| PortalError::InvalidUrl(format!("{raw:?}: {e}")))?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(PortalError::InvalidUrl(format!("{raw:?}: scheme must be http or https")));
    }
    if !url.username().is_empty() || url.password().is_some() {
        // Keeps secrets out of feed ids, listings and logs.
        return Err(PortalError::InvalidUrl(
            "credentials embedded in the URL are not accepted; pass username/password instead".into(),
        ));
    }
    Ok(url)
}

fn session_view(session: &Session, compiled: &Compiled) -> SessionView {
    let node = compiled
        .tree
        .node(&session.current_node)
        .unwrap_or_else(|| compiled.tree.root());
    SessionView {
        session_id: session.id.clone(),
        feed_id: session.feed_id.clone(),
        node_id: node.id.clone(),
        prompt: node.prompt.clone(),
        turn_count: session.turn_count,
        items: compiled
            .tree
            .feed()
            .items
            .iter()
            .zip(&compiled.tree.grammar().rules)
            .map(|(item, rule)| ItemView {
                index: item.index,
                title: item.title.clone(),
                phrase: rule.text(),
            })
            .collect(),
    }
}

/// What a refresh replaced, for deciding which paths still mean the same
/// thing.
struct Change<'a> {
    previous: Option<&'a FeedDocument>,
    current: &'a FeedDocument,
    compiled: Option<&'a Compiled>,
}

impl Change<'_> {
    /// True when the node at `path` is gone or its item's title changed.
    fn invalidates(&self, path: &[usize]) -> bool {
        let Some(&k) = path.first() else {
            return false;
        };
        let gone = self.compiled.is_none_or(|c| c.tree.node_at(path).is_none());
        let changed = match (self.previous.and_then(|d| d.item(k)), self.current.item(k)) {
            (_, None) => true,
            (Some(old), Some(new)) => old.title != new.title,
            (None, Some(_)) => false,
        };
        gone || changed
    }

    fn mark_stale(&self, history: &mut [PathRecord]) {
        for record in history.iter_mut().filter(|r| !r.stale) {
            record.stale = self.invalidates(&record.path);
        }
    }
}
