use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use url::Url;

use super::history::{assign_history_shortcuts, rank_paths, record_path, PathRecord};
use super::tree::{node_id, NodeKind, ROOT_ID};
use super::{DialogError, DialogTree, SemanticTag, ShortcutIndex};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Next,
    Previous,
    Repeat,
    Back,
    Follow,
    Home,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Next,
        Command::Previous,
        Command::Repeat,
        Command::Back,
        Command::Follow,
        Command::Home,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Next => "next",
            Command::Previous => "previous",
            Command::Repeat => "repeat",
            Command::Back => "back",
            Command::Follow => "follow",
            Command::Home => "home",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = DialogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| DialogError::UnknownCommand(s.to_string()))
    }
}

/// One user turn, as the recognizer (or the text stand-in) reports it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DialogInput {
    /// A full grammar phrase was recognized.
    PhraseMatch(SemanticTag),
    /// Loose words to be scored against the shortcut index.
    ShortcutQuery(Vec<String>),
    Command(Command),
}

impl DialogInput {
    pub fn shortcut(utterance: &str) -> Self {
        DialogInput::ShortcutQuery(tokenize(utterance))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Nomatch,
    Noinput,
    InvalidCommand,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Nomatch => "no match",
            RejectReason::Noinput => "no input",
            RejectReason::InvalidCommand => "invalid command",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DialogAction {
    Prompt { node_id: String },
    AnnounceLink { url: Url },
    EnterFeed { url: Url },
    Reject { reason: RejectReason },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub feed_id: String,
    pub current_node: String,
    pub history: Vec<PathRecord>,
    pub turn_count: u64,
}

impl Session {
    pub fn new(id: impl Into<String>, feed_id: impl Into<String>, history: Vec<PathRecord>) -> Self {
        Self {
            id: id.into(),
            feed_id: feed_id.into(),
            current_node: ROOT_ID.to_string(),
            history,
            turn_count: 0,
        }
    }
}

/// Tells the dialog whether a link points at another feed the portal
/// already serves, in which case following it enters that feed.
pub trait FeedDirectory {
    fn is_subscribed(&self, url: &Url) -> bool;
}

/// No subscriptions: every link is announced.
impl FeedDirectory for () {
    fn is_subscribed(&self, _: &Url) -> bool {
        false
    }
}

/// A set of feed URLs, compared with trailing slashes ignored.
#[derive(Debug, Clone, Default)]
pub struct SubscribedUrls(HashSet<String>);

impl SubscribedUrls {
    pub fn normalize(url: &str) -> &str {
        url.trim_end_matches('/')
    }
}

impl<S: AsRef<str>> FromIterator<S> for SubscribedUrls {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        SubscribedUrls(
            iter.into_iter()
                .map(|u| Self::normalize(u.as_ref()).to_string())
                .collect(),
        )
    }
}

impl FeedDirectory for SubscribedUrls {
    fn is_subscribed(&self, url: &Url) -> bool {
        self.0.contains(Self::normalize(url.as_str()))
    }
}

/// Everything a turn needs besides the session and the tree.
pub struct TurnContext<'a> {
    pub now: DateTime<Utc>,
    pub directory: &'a dyn FeedDirectory,
}

/// Applies one input to a session and returns the successor session and
/// the action to take. Item phrases and shortcut words are accepted at
/// every node; commands are interpreted relative to the current node.
pub fn advance(
    session: &Session,
    tree: &DialogTree,
    index: &ShortcutIndex,
    input: &DialogInput,
    ctx: &TurnContext<'_>,
) -> Result<(Session, DialogAction), DialogError> {
    let current = tree
        .node(&session.current_node)
        .ok_or_else(|| DialogError::UnknownNode(session.current_node.clone()))?;

    let outcome: Result<(String, DialogAction), RejectReason> = match input {
        DialogInput::PhraseMatch(tag) => tree
            .node_at(&[tag.item()])
            .map(|n| prompt(&n.id))
            .ok_or(RejectReason::Nomatch),
        DialogInput::ShortcutQuery(words) if words.is_empty() => Err(RejectReason::Noinput),
        DialogInput::ShortcutQuery(words) => {
            let shortcuts = assign_history_shortcuts(&rank_paths(&session.history));
            match shortcuts.iter().find(|s| tokenize(&s.phrase) == *words) {
                Some(s) => tree
                    .node_at(&s.path)
                    .map(|n| prompt(&n.id))
                    .ok_or(RejectReason::Nomatch),
                None => index
                    .score(words)
                    .first()
                    .map(|best| prompt(&node_id(&[best.item])))
                    .ok_or(RejectReason::Nomatch),
            }
        }
        DialogInput::Command(cmd) => command(*cmd, current, tree, ctx),
    };

    let mut next = session.clone();
    next.turn_count += 1;
    let action = match outcome {
        Ok((target, action)) => {
            let path = tree
                .node(&target)
                .ok_or_else(|| DialogError::UnknownNode(target.clone()))?
                .path
                .clone();
            record_path(&mut next.history, &path, ctx.now);
            next.current_node = target;
            action
        }
        Err(reason) => DialogAction::Reject { reason },
    };
    Ok((next, action))
}

fn prompt(id: &str) -> (String, DialogAction) {
    (
        id.to_string(),
        DialogAction::Prompt {
            node_id: id.to_string(),
        },
    )
}

fn command(
    cmd: Command,
    current: &super::DialogNode,
    tree: &DialogTree,
    ctx: &TurnContext<'_>,
) -> Result<(String, DialogAction), RejectReason> {
    let item = current.item_index;
    let sibling = |target: Option<usize>| {
        target
            .and_then(|k| tree.node_at(&[k]))
            .map(|n| prompt(&n.id))
            .ok_or(RejectReason::InvalidCommand)
    };
    match cmd {
        Command::Next => sibling(Some(item.map_or(1, |k| k + 1))),
        Command::Previous => sibling(item.and_then(|k| k.checked_sub(1))),
        Command::Repeat => Ok(prompt(&current.id)),
        Command::Home => Ok(prompt(ROOT_ID)),
        Command::Back => tree
            .parent(current)
            .map(|p| prompt(&p.id))
            .ok_or(RejectReason::InvalidCommand),
        Command::Follow => {
            let url = tree.link_of(current).ok_or(RejectReason::InvalidCommand)?;
            let target = match current.kind {
                NodeKind::ItemDetail => current
                    .children
                    .first()
                    .cloned()
                    .ok_or(RejectReason::InvalidCommand)?,
                _ => current.id.clone(),
            };
            let action = if ctx.directory.is_subscribed(url) {
                DialogAction::EnterFeed { url: url.clone() }
            } else {
                DialogAction::AnnounceLink { url: url.clone() }
            };
            Ok((target, action))
        }
    }
}
