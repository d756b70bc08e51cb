#![no_main]

use std::collections::HashSet;

use libfuzzer_sys::fuzz_target;
use url::Url;
use voxfeed_core::feed::{FeedDocument, FeedFormat, FeedItem, ChannelMeta};
use voxfeed_core::Grammar;

// One title per line, fed straight to the grammar generator.
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let items: Vec<FeedItem> = text
        .lines()
        .take(200)
        .enumerate()
        .map(|(i, t)| FeedItem::new(i + 1, t, None, None, None))
        .collect();
    let doc = FeedDocument {
        source_url: Url::parse("http://fuzz.example/").unwrap(),
        format: FeedFormat::Rss2,
        channel: ChannelMeta { title: "fuzz".into(), link: None, language: None, pub_date: None },
        items,
        fetched_at: Default::default(),
    };
    let Ok(grammar) = Grammar::generate(&doc) else { return };
    assert_eq!(grammar.rules.len(), doc.items.len());
    let keys: HashSet<Vec<String>> = grammar.rules.iter().map(|r| r.key()).collect();
    assert_eq!(keys.len(), grammar.rules.len(), "phrases collide");
});
