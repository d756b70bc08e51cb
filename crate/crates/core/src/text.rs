//! Word splitting shared by the shortcut index, the grammar generator and
//! the text-mode navigator.

/// Words that are never indexed and never end a grammar phrase.
pub const STOPWORDS: [&str; 15] = [
    "a", "an", "the", "and", "or", "of", "to", "in", "on", "at", "for", "is", "are", "with", "by",
];

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

/// Splits `text` into words, keeping the original casing.
///
/// A word is a maximal run of letters and digits; everything else
/// (whitespace, punctuation, hyphens, apostrophes) separates words.
pub fn split_words(text: &str) -> Vec<&str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect()
}

/// Lowercased words of `text`, in order, duplicates preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    split_words(text).into_iter().map(str::to_lowercase).collect()
}

const NUMBER_WORDS: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty",
];

/// Spoken form of an item ordinal: English words up to twenty, decimal
/// digits beyond.
pub fn number_word(n: usize) -> String {
    match n {
        1..=20 => NUMBER_WORDS[n - 1].to_string(),
        _ => n.to_string(),
    }
}
