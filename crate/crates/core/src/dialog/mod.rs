//! Dialog routes, shortcut scoring, grammar generation and the
//! mixed-initiative state machine that walks them.

mod grammar;
mod history;
mod index;
mod session;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grammar::{Grammar, GrammarRule};
pub use history::{
    assign_history_shortcuts, rank_paths, record_path, HistoryShortcut, PathRecord,
    HISTORY_SHORTCUTS,
};
pub use index::{ScoredItem, ShortcutIndex};
pub use session::{
    advance, Command, DialogAction, DialogInput, FeedDirectory, RejectReason, Session,
    SubscribedUrls, TurnContext,
};
pub use tree::{node_id, DialogNode, DialogTree, NodeKind, ROOT_ID, ROOT_PROMPT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DialogError {
    #[error("feed has no items")]
    EmptyFeed,
    #[error("unknown dialog node {0:?}")]
    UnknownNode(String),
    #[error("semantic tag must be a positive decimal number, got {0:?}")]
    InvalidTag(String),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
}

/// Grammar semantic tag: the decimal index of the item a phrase selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemanticTag(usize);

impl SemanticTag {
    pub fn new(item: usize) -> Self {
        SemanticTag(item)
    }

    pub fn item(self) -> usize {
        self.0
    }
}

impl fmt::Display for SemanticTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for SemanticTag {
    type Err = DialogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(DialogError::InvalidTag(s.to_string()));
        }
        s.parse()
            .ok()
            .filter(|&n| n > 0)
            .map(SemanticTag)
            .ok_or_else(|| DialogError::InvalidTag(s.to_string()))
    }
}

impl Serialize for SemanticTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SemanticTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_are_positive_decimals() {
        assert_eq!("12".parse::<SemanticTag>().unwrap().item(), 12);
        for bad in ["", "0", "-1", "+1", "1.0", "one", " 1", "99999999999999999999999"] {
            assert!(bad.parse::<SemanticTag>().is_err(), "{bad}");
        }
        assert_eq!(SemanticTag::new(7).to_string(), "7");
    }
}
