//! Shared test fixtures for the voxfeed crates.

pub mod gen;
pub mod oracle;
pub mod stub;

pub use stub::{RecordedRequest, Route, StubServer};

/// The news feed shown alongside the XHTML+Voice page it produces:
/// two items placed next to, rather than inside, `<channel>`.
pub const NEWS_FEED_RSS: &str = include_str!("../fixtures/news_feed.rss");

pub const NEWS_FEED_TITLES: [&str; 2] = [
    "US seeks more stringent UN sanctions against Iran - San Jose Mercury News",
    "Senator takes a meeting at CAA - The Southern",
];

/// An Atom 0.3 calendar feed declared as ISO-8859-1.
pub const CALENDAR_ATOM: &[u8] = include_bytes!("../fixtures/calendar.atom");

/// An RSS 2.0 feed encoded in ISO-8859-1 with accented titles.
pub const LATIN1_RSS: &[u8] = include_bytes!("../fixtures/latin1.rss");

/// An Atom 1.0 feed, which is not a supported format.
pub const ATOM10_FEED: &str = include_str!("../fixtures/atom10.xml");
