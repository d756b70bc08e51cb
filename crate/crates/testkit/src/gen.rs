//! Random feed generators.

use rand::seq::IndexedRandom;
use rand::Rng;

const VOCAB: &[&str] = &[
    "rust", "async", "runtime", "market", "senator", "meeting", "iran", "sanctions", "news",
    "report", "storm", "city", "council", "vote", "budget", "school", "river", "bridge", "music",
    "festival", "science", "space", "launch", "health", "study", "court", "ruling", "energy",
    "price", "team", "wins", "final", "new", "law", "water", "fire", "road", "train", "plan",
    "Jose", "UN", "CAA", "US", "one", "two", "item", "history",
];

const STOP: &[&str] = &["a", "an", "the", "and", "or", "of", "to", "in", "on", "at", "for", "is", "are", "with", "by"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemSpec {
    pub title: Option<String>,
    pub link: Option<String>,
    pub description: Option<String>,
}

/// A title of `words` words drawn from a small vocabulary with stopwords
/// mixed in, so prefixes collide often.
pub fn title(rng: &mut impl Rng, words: usize) -> String {
    (0..words)
        .map(|_| {
            if rng.random_bool(0.25) {
                *STOP.choose(rng).unwrap()
            } else {
                *VOCAB.choose(rng).unwrap()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `n` titles of 1 to 12 words; with probability `dup_rate` an item copies
/// an earlier title verbatim.
pub fn titles(rng: &mut impl Rng, n: usize, dup_rate: f64) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(n);
    for _ in 0..n {
        if !out.is_empty() && rng.random_bool(dup_rate) {
            let copy = out.choose(rng).unwrap().clone();
            out.push(copy);
        } else {
            let words = rng.random_range(1..=12);
            out.push(title(rng, words));
        }
    }
    out
}

pub fn items_from_titles(titles: &[String], linked: bool) -> Vec<ItemSpec> {
    titles
        .iter()
        .enumerate()
        .map(|(i, t)| ItemSpec {
            title: Some(t.clone()),
            link: linked.then(|| format!("http://stories.example.com/{}", i + 1)),
            description: None,
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A UTF-8 RSS 2.0 document with the given items inside `<channel>`.
pub fn rss(channel_title: &str, items: &[ItemSpec]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rss version=\"2.0\">\n<channel>\n");
    out.push_str(&format!("<title>{}</title>\n", escape(channel_title)));
    for item in items {
        out.push_str("<item>");
        if let Some(t) = &item.title {
            out.push_str(&format!("<title>{}</title>", escape(t)));
        }
        if let Some(l) = &item.link {
            out.push_str(&format!("<link>{}</link>", escape(l)));
        }
        if let Some(d) = &item.description {
            out.push_str(&format!("<description>{}</description>", escape(d)));
        }
        out.push_str("</item>\n");
    }
    out.push_str("</channel>\n</rss>\n");
    out
}

/// A linked feed of `n` items whose titles are all distinct and each carry
/// one word (`topicNN`) found in no other title.
pub fn distinct_feed(n: usize) -> (String, Vec<String>) {
    let keywords: Vec<String> = (1..=n).map(|i| format!("topic{i:02}")).collect();
    let titles: Vec<String> = keywords
        .iter()
        .map(|k| format!("Daily report on {k} and more news"))
        .collect();
    (rss("Synthetic", &items_from_titles(&titles, true)), keywords)
}
