//! Helpers shared by the integration tests; the oracles themselves live in
//! the testkit and never call into the code paths they check.

#![allow(dead_code)]

use std::sync::Arc;

use url::Url;
use voxfeed_core::feed::FeedDocument;
use voxfeed_core::{DialogTree, ShortcutIndex};
use voxfeed_testkit::gen;

pub use voxfeed_testkit::oracle::*;

pub fn source() -> Url {
    Url::parse("http://feeds.example.com/top.rss").unwrap()
}

pub fn parse(xml: &str) -> FeedDocument {
    FeedDocument::from_bytes(xml.as_bytes(), &source()).expect("fixture parses")
}

pub fn feed_from_titles(titles: &[String], linked: bool) -> FeedDocument {
    parse(&gen::rss("Fuzz", &gen::items_from_titles(titles, linked)))
}

pub fn compile(feed: FeedDocument) -> (DialogTree, ShortcutIndex) {
    let index = ShortcutIndex::build(&feed).unwrap();
    (DialogTree::build(Arc::new(feed)).unwrap(), index)
}
