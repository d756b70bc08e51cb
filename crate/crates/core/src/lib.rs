//! Core of voxfeed: turns RSS 2.0 and Atom 0.3 feeds into spoken dialogs.
//!
//! - [`feed`] decodes and normalizes feed documents and resolves stored
//!   credentials for protected feeds.
//! - [`dialog`] builds the dialog tree, the item grammar and the shortcut
//!   index for a feed, and runs the turn-by-turn state machine.
//! - [`render`] serializes dialog nodes as JSGF, VoiceXML and XHTML+Voice.
//!
//! Everything here is pure; fetching and serving live in `voxfeed-portal`.

pub mod dialog;
pub mod feed;
pub mod render;
pub mod text;

pub use dialog::{DialogTree, Grammar, ShortcutIndex};
pub use feed::{FeedDocument, FeedError, FeedFormat};
pub use text::tokenize;
