use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DialogError, SemanticTag};
use crate::feed::FeedDocument;
use crate::text::{is_stopword, number_word, split_words};

/// Shortest phrase length before stopword and collision extension.
const MIN_PHRASE_WORDS: usize = 3;

/// One spoken alternative of the item grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarRule {
    /// Words as spoken, in title casing.
    pub phrase: Vec<String>,
    pub tag: SemanticTag,
}

impl GrammarRule {
    pub fn text(&self) -> String {
        self.phrase.join(" ")
    }

    /// Lowercased phrase words, the form utterances are compared in.
    pub fn key(&self) -> Vec<String> {
        self.phrase.iter().map(|w| w.to_lowercase()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grammar {
    pub name: String,
    pub rules: Vec<GrammarRule>,
}

impl Grammar {
    /// Builds one rule per item from the item titles.
    ///
    /// Each phrase is the shortest title prefix that has at least three
    /// words (or the whole title), does not end in a stopword, and differs
    /// case-insensitively from every other phrase. Colliding phrases grow
    /// a word at a time; items whose words are exhausted while still
    /// colliding get the spoken item number appended, except the first.
    pub fn generate(feed: &FeedDocument) -> Result<Self, DialogError> {
        if feed.items.is_empty() {
            return Err(DialogError::EmptyFeed);
        }
        let mut cands: Vec<Candidate> = feed
            .items
            .iter()
            .map(|item| {
                let mut words: Vec<String> =
                    split_words(&item.title).into_iter().map(str::to_string).collect();
                if words.is_empty() {
                    words = vec!["item".to_string(), number_word(item.index)];
                }
                Candidate::new(item.index, words)
            })
            .collect();

        loop {
            let mut groups: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
            for (pos, c) in cands.iter().enumerate() {
                groups.entry(c.key()).or_default().push(pos);
            }
            let mut changed = false;
            for members in groups.values().filter(|m| m.len() > 1) {
                let growable: Vec<usize> =
                    members.iter().copied().filter(|&p| cands[p].can_grow()).collect();
                if growable.is_empty() {
                    // Same words throughout: the earliest item keeps its phrase.
                    for &p in &members[1..] {
                        let spoken = number_word(cands[p].index);
                        cands[p].suffix.push(spoken);
                    }
                } else {
                    for p in growable {
                        cands[p].grow();
                    }
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }

        Ok(Grammar {
            name: "items".to_string(),
            rules: cands
                .into_iter()
                .map(|c| GrammarRule {
                    tag: SemanticTag::new(c.index),
                    phrase: c.phrase(),
                })
                .collect(),
        })
    }

    pub fn rule_for(&self, item: usize) -> Option<&GrammarRule> {
        self.rules.iter().find(|r| r.tag.item() == item)
    }

    /// The rule whose phrase equals `words` (compared lowercased).
    pub fn match_words(&self, words: &[String]) -> Option<&GrammarRule> {
        self.rules.iter().find(|r| {
            r.phrase.len() == words.len()
                && r.phrase.iter().zip(words).all(|(p, w)| p.to_lowercase() == *w)
        })
    }
}

struct Candidate {
    index: usize,
    words: Vec<String>,
    lower: Vec<String>,
    len: usize,
    suffix: Vec<String>,
}

impl Candidate {
    fn new(index: usize, words: Vec<String>) -> Self {
        let lower = words.iter().map(|w| w.to_lowercase()).collect();
        let mut c = Candidate {
            index,
            len: MIN_PHRASE_WORDS.min(words.len()),
            words,
            lower,
            suffix: Vec::new(),
        };
        c.skip_trailing_stopwords();
        c
    }

    fn can_grow(&self) -> bool {
        self.suffix.is_empty() && self.len < self.words.len()
    }

    fn grow(&mut self) {
        self.len += 1;
        self.skip_trailing_stopwords();
    }

    fn skip_trailing_stopwords(&mut self) {
        while self.len < self.words.len() && is_stopword(&self.lower[self.len - 1]) {
            self.len += 1;
        }
    }

    fn key(&self) -> Vec<String> {
        self.lower[..self.len]
            .iter()
            .cloned()
            .chain(self.suffix.iter().cloned())
            .collect()
    }

    fn phrase(&self) -> Vec<String> {
        self.words[..self.len]
            .iter()
            .cloned()
            .chain(self.suffix.iter().cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialog::test_support::feed_of;

    fn phrases(titles: &[&str]) -> Vec<String> {
        Grammar::generate(&feed_of(titles))
            .unwrap()
            .rules
            .iter()
            .map(GrammarRule::text)
            .collect()
    }

    #[test]
    fn news_headlines_grammar() {
        let g = Grammar::generate(&feed_of(&[
            "US seeks more stringent UN sanctions against Iran - San Jose Mercury News",
            "Senator takes a meeting at CAA - The Southern",
        ]))
        .unwrap();
        assert_eq!(g.name, "items");
        assert_eq!(g.rules[0].text(), "US seeks more");
        assert_eq!(g.rules[0].tag.to_string(), "1");
        assert_eq!(g.rules[1].text(), "Senator takes a meeting");
        assert_eq!(g.rules[1].tag.to_string(), "2");
    }

    #[test]
    fn short_title_is_used_whole() {
        assert_eq!(phrases(&["Hello world"]), ["Hello world"]);
    }

    #[test]
    fn colliding_prefixes_extend_until_distinct() {
        assert_eq!(
            phrases(&["Rust async runtime improvements", "Rust async runtime regressions"]),
            ["Rust async runtime improvements", "Rust async runtime regressions"]
        );
    }

    #[test]
    fn exhausted_title_keeps_its_phrase_while_longer_one_grows() {
        assert_eq!(
            phrases(&["Rust async runtime", "Rust async runtime regressions", "Other news today"]),
            ["Rust async runtime", "Rust async runtime regressions", "Other news today"]
        );
    }

    #[test]
    fn stopword_ending_phrase_extends_past_every_stopword() {
        assert_eq!(phrases(&["State of the art of the union"]), ["State of the art"]);
        assert_eq!(phrases(&["Go for it in"]), ["Go for it"]);
        // Exhausted titles may still end in a stopword.
        assert_eq!(phrases(&["Back to the"]), ["Back to the"]);
        assert_eq!(phrases(&["Back to the", "Back to the future"]), ["Back to the", "Back to the future"]);
    }

    #[test]
    fn identical_titles_get_spoken_numbers() {
        assert_eq!(
            phrases(&["Hello world", "Hello world", "Hello world"]),
            ["Hello world", "Hello world two", "Hello world three"]
        );
    }

    #[test]
    fn identical_titles_beyond_twenty_use_digits() {
        let titles: Vec<&str> = std::iter::repeat_n("Same", 22).collect();
        let p = phrases(&titles);
        assert_eq!(p[0], "Same");
        assert_eq!(p[19], "Same twenty");
        assert_eq!(p[21], "Same 22");
    }

    #[test]
    fn case_insensitive_collisions() {
        assert_eq!(
            phrases(&["BIG news day", "big NEWS DAY today"]),
            ["BIG news day", "big NEWS DAY today"]
        );
    }

    #[test]
    fn wordless_titles_fall_back_to_item_numbers() {
        assert_eq!(phrases(&["!!!", "---"]), ["item one", "item two"]);
    }

    #[test]
    fn suffix_collision_with_another_title_is_resolved() {
        let p = phrases(&["A b c", "A b c", "A b c two"]);
        let mut keys: Vec<String> = p.iter().map(|s| s.to_lowercase()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 3, "{p:?}");
    }

    #[test]
    fn match_words_is_case_insensitive() {
        let g = Grammar::generate(&feed_of(&["US seeks more stringent sanctions"])).unwrap();
        let words: Vec<String> = vec!["us".into(), "seeks".into(), "more".into()];
        assert_eq!(g.match_words(&words).unwrap().tag.item(), 1);
        assert!(g.match_words(&words[..2]).is_none());
    }

    #[test]
    fn empty_feed() {
        assert_eq!(Grammar::generate(&feed_of(&[])), Err(DialogError::EmptyFeed));
    }
}
