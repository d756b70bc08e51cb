//! Independent oracles for checking voxfeed output. Nothing here depends
//! on the crates under test.

pub const STOPWORDS: [&str; 15] = [
    "a", "an", "the", "and", "or", "of", "to", "in", "on", "at", "for", "is", "are", "with", "by",
];

/// Lowercased words by a character-class scan.
pub fn words_of(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphabetic() || c.is_numeric() {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Scores every item by looping over all items and all utterance words,
/// computing document frequencies from scratch.
pub fn brute_force_scores(titles: &[Vec<String>], utterance: &[String]) -> Vec<(usize, f64)> {
    let n = titles.len();
    let mut distinct: Vec<&String> = Vec::new();
    for w in utterance {
        if !distinct.contains(&w) {
            distinct.push(w);
        }
    }
    let mut scored = Vec::new();
    for (i, tokens) in titles.iter().enumerate() {
        let mut score = 0.0f64;
        for w in &distinct {
            if STOPWORDS.contains(&w.as_str()) || !tokens.contains(w) {
                continue;
            }
            let df = titles.iter().filter(|t| t.contains(w)).count();
            score += (n as f64 / df as f64).ln();
        }
        if score > 0.0 {
            scored.push((i + 1, score));
        }
    }
    // Insertion sort: higher score first, then lower index.
    let mut out: Vec<(usize, f64)> = Vec::new();
    for entry in scored {
        let pos = out
            .iter()
            .position(|e| entry.1 > e.1 || (entry.1 == e.1 && entry.0 < e.0))
            .unwrap_or(out.len());
        out.insert(pos, entry);
    }
    out
}

/// Reads back the `<item>` alternatives of a JSGF grammar as
/// (phrase, tag) pairs.
pub fn read_jsgf_items(jsgf: &str) -> Vec<(String, String)> {
    let body = jsgf
        .split("<item> =")
        .nth(1)
        .expect("grammar has an <item> rule");
    let body = body.trim_end().strip_suffix(';').expect("rule ends with ;");
    body.split('|')
        .map(|alt| {
            let alt = alt.trim();
            let open = alt.rfind("( $=\"").expect("semantic tag");
            let phrase = alt[..open].split_whitespace().collect::<Vec<_>>().join(" ");
            let tag = alt[open + 5..]
                .strip_suffix("\" )")
                .expect("tag closes")
                .to_string();
            (phrase, tag)
        })
        .collect()
}

/// Parses with a conforming XML parser; panics with context on failure.
pub fn well_formed(body: &str) -> roxmltree::Document<'_> {
    let opts = roxmltree::ParsingOptions {
        allow_dtd: true,
        ..Default::default()
    };
    roxmltree::Document::parse_with_options(body, opts)
        .unwrap_or_else(|e| panic!("not well-formed: {e}\n{body}"))
}

pub const VXML_NS: &str = "http://www.w3.org/2001/vxml";
pub const XHTML_NS: &str = "http://www.w3.org/1999/xhtml";
pub const XV_NS: &str = "http://www.voicexml.org/2002/xhtml+voice";

/// Structural facts about an XHTML+Voice page.
#[derive(Debug)]
pub struct XvFacts {
    pub options: Vec<(String, String)>,
    pub grammar: String,
    pub prompt: String,
    pub sync_field: String,
    pub sync_input: String,
    pub field_resolves: bool,
    pub input_resolves: bool,
}

pub fn xv_facts(body: &str) -> XvFacts {
    let doc = well_formed(body);
    let el = |ns: &str, name: &str| {
        doc.descendants()
            .filter(move |n| n.is_element() && n.tag_name().namespace() == Some(ns) && n.tag_name().name() == name)
            .collect::<Vec<_>>()
    };
    let text = |n: roxmltree::Node| -> String {
        n.descendants().filter(|d| d.is_text()).filter_map(|d| d.text()).collect()
    };
    let options = el(XHTML_NS, "option")
        .into_iter()
        .map(|o| (o.attribute("value").unwrap_or_default().to_string(), text(o)))
        .collect();
    let grammars = el(VXML_NS, "grammar");
    assert_eq!(grammars.len(), 1, "one voice grammar");
    let prompts = el(VXML_NS, "prompt");
    assert_eq!(prompts.len(), 1, "one voice prompt");
    let syncs = el(XV_NS, "sync");
    assert_eq!(syncs.len(), 1, "one sync element");
    let sync = syncs[0];
    let sync_field = sync.attribute((XV_NS, "field")).unwrap_or_default().to_string();
    let sync_input = sync.attribute((XV_NS, "input")).unwrap_or_default().to_string();
    let field_id = sync_field.trim_start_matches('#');
    let field_resolves = el(VXML_NS, "field")
        .iter()
        .any(|f| f.attribute((XV_NS, "id")) == Some(field_id) || f.attribute("id") == Some(field_id));
    let input_resolves = el(XHTML_NS, "select")
        .iter()
        .any(|s| s.attribute("name") == Some(sync_input.as_str()) || s.attribute("id") == Some(sync_input.as_str()));
    XvFacts {
        options,
        grammar: text(grammars[0]),
        prompt: text(prompts[0]),
        sync_field,
        sync_input,
        field_resolves,
        input_resolves,
    }
}

/// Number of `form` elements in the VoiceXML namespace.
pub fn vxml_form_count(body: &str) -> usize {
    let doc = well_formed(body);
    doc.descendants()
        .filter(|n| n.is_element() && n.tag_name().namespace() == Some(VXML_NS) && n.tag_name().name() == "form")
        .count()
}
