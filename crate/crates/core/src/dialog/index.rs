use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::DialogError;
use crate::feed::FeedDocument;
use crate::text::is_stopword;

/// Inverted index from title words to items, with an IDF weight per word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortcutIndex {
    item_count: usize,
    postings: BTreeMap<String, BTreeSet<usize>>,
    weights: BTreeMap<String, f64>,
}

/// One scored item. Scores are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredItem {
    pub item: usize,
    pub score: f64,
}

impl ShortcutIndex {
    pub fn build(feed: &FeedDocument) -> Result<Self, DialogError> {
        let n = feed.items.len();
        if n == 0 {
            return Err(DialogError::EmptyFeed);
        }
        let mut postings: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for item in &feed.items {
            for token in item.tokens.iter().filter(|t| !is_stopword(t)) {
                postings.entry(token.clone()).or_default().insert(item.index);
            }
        }
        let weights = postings
            .iter()
            .map(|(word, items)| (word.clone(), (n as f64 / items.len() as f64).ln()))
            .collect();
        Ok(Self {
            item_count: n,
            postings,
            weights,
        })
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn postings(&self, word: &str) -> Option<&BTreeSet<usize>> {
        self.postings.get(word)
    }

    pub fn weight(&self, word: &str) -> Option<f64> {
        self.weights.get(word).copied()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// Ranks items against a tokenized utterance.
    ///
    /// Each distinct utterance word adds its weight to every item whose
    /// title contains it. Only positive scores are returned, best first,
    /// ties broken by ascending item index.
    pub fn score(&self, utterance: &[String]) -> Vec<ScoredItem> {
        let mut seen = BTreeSet::new();
        let mut totals: BTreeMap<usize, f64> = BTreeMap::new();
        for word in utterance {
            if !seen.insert(word.as_str()) {
                continue;
            }
            let (Some(items), Some(&w)) = (self.postings.get(word), self.weights.get(word)) else {
                continue;
            };
            for &item in items {
                *totals.entry(item).or_insert(0.0) += w;
            }
        }
        let mut ranked: Vec<ScoredItem> = totals
            .into_iter()
            .filter(|&(_, score)| score > 0.0)
            .map(|(item, score)| ScoredItem { item, score })
            .collect();
        ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.item.cmp(&b.item)));
        ranked
    }
}
