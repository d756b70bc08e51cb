//! The voxfeed portal: fetches subscribed feeds (with single-sign-on Basic
//! credentials per URL prefix), keeps their dialog trees, runs dialog
//! sessions and serves everything over an HTTP/JSON API.

pub mod api;
pub mod fetch;
mod portal;
pub mod state;

pub use fetch::{FetchConfig, FetchError, Fetcher, RawFetch};
pub use portal::{
    FeedSummary, HistoryView, InputOutcome, ItemView, Portal, PortalConfig, PortalError, SessionView,
};
pub use state::{feed_id_for, load_state, persist_state, FeedSubscription, PersistedState, StateError};
