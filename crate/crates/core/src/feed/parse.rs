use chrono::{DateTime, Utc};
use roxmltree::{Document, Node, ParsingOptions};
use url::Url;

use super::date::pub_date;
use super::decode::decode_document;
use super::{ChannelMeta, FeedDocument, FeedError, FeedFormat, FeedItem};

pub const ATOM03_NS: &str = "http://purl.org/atom/ns#";

fn parse_xml(text: &str) -> Result<Document<'_>, FeedError> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, opts).map_err(|e| FeedError::Xml(e.to_string()))
}

/// Classifies a feed by its root element.
pub fn detect_format(body: &[u8]) -> Result<FeedFormat, FeedError> {
    let text = decode_document(body)?;
    let doc = parse_xml(&text)?;
    classify(doc.root_element())
}

fn classify(root: Node<'_, '_>) -> Result<FeedFormat, FeedError> {
    let name = root.tag_name();
    match (name.name(), name.namespace()) {
        ("rss", None) if root.attribute("version").is_some_and(|v| v.starts_with("2.")) => {
            Ok(FeedFormat::Rss2)
        }
        ("feed", Some(ATOM03_NS)) => Ok(FeedFormat::Atom03),
        (root, namespace) => Err(FeedError::UnknownFormat {
            root: root.to_string(),
            namespace: namespace.map(str::to_string),
        }),
    }
}

/// Parses `body` as `format`, stamping the document with the current time.
pub fn parse_feed(
    body: &[u8],
    format: FeedFormat,
    source_url: &Url,
) -> Result<FeedDocument, FeedError> {
    parse_feed_at(body, format, source_url, Utc::now())
}

pub fn parse_feed_at(
    body: &[u8],
    format: FeedFormat,
    source_url: &Url,
    fetched_at: DateTime<Utc>,
) -> Result<FeedDocument, FeedError> {
    let text = decode_document(body)?;
    let doc = parse_xml(&text)?;
    let root = doc.root_element();
    let found = classify(root)?;
    if found != format {
        return Err(FeedError::UnknownFormat {
            root: root.tag_name().name().to_string(),
            namespace: root.tag_name().namespace().map(str::to_string),
        });
    }
    let (channel, raw_items) = match format {
        FeedFormat::Rss2 => rss(root, source_url),
        FeedFormat::Atom03 => atom(root, source_url),
    };
    let channel = channel?;
    let items = raw_items
        .into_iter()
        .filter(|i| !i.title.is_empty())
        .enumerate()
        .map(|(n, i)| FeedItem::new(n + 1, i.title, i.link, i.description, i.pub_date))
        .collect();
    Ok(FeedDocument {
        source_url: source_url.clone(),
        format,
        channel,
        items,
        fetched_at,
    })
}

struct RawItem {
    title: String,
    link: Option<Url>,
    description: Option<String>,
    pub_date: Option<super::PubDate>,
}

fn rss(root: Node<'_, '_>, base: &Url) -> (Result<ChannelMeta, FeedError>, Vec<RawItem>) {
    let channel = plain_child(root, "channel");
    let meta = channel
        .and_then(|c| {
            let title = collapse(&text_of(plain_child(c, "title")?));
            (!title.is_empty()).then(|| ChannelMeta {
                title,
                link: plain_child(c, "link").and_then(|l| resolve(base, &text_of(l))),
                language: plain_child(c, "language")
                    .map(|l| text_of(l).trim().to_string())
                    .filter(|l| !l.is_empty()),
                pub_date: plain_child(c, "pubDate")
                    .and_then(|d| pub_date(&text_of(d), FeedFormat::Rss2)),
            })
        })
        .ok_or(FeedError::MissingChannelTitle);

    // Items are accepted both inside <channel> and as its siblings.
    let mut items = Vec::new();
    for child in root.children().filter(Node::is_element) {
        if is_plain(child, "channel") {
            items.extend(
                child
                    .children()
                    .filter(|n| is_plain(*n, "item"))
                    .map(|n| rss_item(n, base)),
            );
        } else if is_plain(child, "item") {
            items.push(rss_item(child, base));
        }
    }
    (meta, items)
}

fn rss_item(item: Node<'_, '_>, base: &Url) -> RawItem {
    RawItem {
        title: plain_child(item, "title")
            .map(|t| collapse(&text_of(t)))
            .unwrap_or_default(),
        link: plain_child(item, "link").and_then(|l| resolve(base, &text_of(l))),
        description: plain_child(item, "description").and_then(|d| html_to_text(&text_of(d))),
        pub_date: plain_child(item, "pubDate").and_then(|d| pub_date(&text_of(d), FeedFormat::Rss2)),
    }
}

fn atom(root: Node<'_, '_>, base: &Url) -> (Result<ChannelMeta, FeedError>, Vec<RawItem>) {
    let meta = atom_child(root, "title")
        .map(atom_text)
        .filter(|t| !t.is_empty())
        .map(|title| ChannelMeta {
            title,
            link: atom_alternate(root, base),
            language: root
                .attribute(("http://www.w3.org/XML/1998/namespace", "lang"))
                .map(str::to_string),
            pub_date: atom_child(root, "modified")
                .and_then(|d| pub_date(&text_of(d), FeedFormat::Atom03)),
        })
        .ok_or(FeedError::MissingChannelTitle);

    let items = root
        .children()
        .filter(|n| is_atom(*n, "entry"))
        .map(|entry| RawItem {
            title: atom_child(entry, "title").map(atom_text).unwrap_or_default(),
            link: atom_alternate(entry, base),
            description: atom_child(entry, "summary")
                .or_else(|| atom_child(entry, "content"))
                .and_then(|d| html_to_text(&text_of(d))),
            pub_date: atom_child(entry, "modified")
                .or_else(|| atom_child(entry, "issued"))
                .and_then(|d| pub_date(&text_of(d), FeedFormat::Atom03)),
        })
        .collect();
    (meta, items)
}

fn atom_text(node: Node<'_, '_>) -> String {
    let text = text_of(node);
    let escaped = node.attribute("mode") == Some("escaped")
        || node.attribute("type").is_some_and(|t| t.contains("html"));
    if escaped {
        html_to_text(&text).unwrap_or_default()
    } else {
        collapse(&text)
    }
}

fn atom_alternate(parent: Node<'_, '_>, base: &Url) -> Option<Url> {
    parent
        .children()
        .filter(|n| is_atom(*n, "link"))
        .find(|l| l.attribute("rel").unwrap_or("alternate") == "alternate")
        .and_then(|l| l.attribute("href"))
        .and_then(|href| resolve(base, href))
}

fn is_plain(node: Node<'_, '_>, name: &str) -> bool {
    node.is_element() && node.tag_name().name() == name && node.tag_name().namespace().is_none()
}

fn is_atom(node: Node<'_, '_>, name: &str) -> bool {
    node.is_element() && node.tag_name().name() == name && node.tag_name().namespace() == Some(ATOM03_NS)
}

fn plain_child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|n| is_plain(*n, name))
}

fn atom_child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|n| is_atom(*n, name))
}

/// Concatenated text of all descendant text and CDATA nodes.
fn text_of(node: Node<'_, '_>) -> String {
    node.descendants()
        .filter(Node::is_text)
        .filter_map(|n| n.text())
        .collect()
}

fn resolve(base: &Url, href: &str) -> Option<Url> {
    let href = href.trim();
    if href.is_empty() {
        return None;
    }
    base.join(href).ok()
}

fn collapse(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Reduces an HTML fragment to speakable text: tags dropped, common
/// entities decoded, whitespace collapsed. Empty results become `None`.
pub(crate) fn html_to_text(html: &str) -> Option<String> {
    let mut out = String::with_capacity(html.len());
    let mut rest = html;
    while let Some(c) = rest.chars().next() {
        if c == '<' {
            let next = rest[1..].chars().next();
            if next.is_some_and(|n| n.is_ascii_alphabetic() || matches!(n, '/' | '!' | '?')) {
                match rest.find('>') {
                    Some(end) => {
                        out.push(' ');
                        rest = &rest[end + 1..];
                        continue;
                    }
                    None => break,
                }
            }
        } else if c == '&' {
            if let Some((decoded, len)) = html_entity(rest) {
                out.push(decoded);
                rest = &rest[len..];
                continue;
            }
        }
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    let text = collapse(&out);
    (!text.is_empty()).then_some(text)
}

fn html_entity(s: &str) -> Option<(char, usize)> {
    let end = s.bytes().take(12).position(|b| b == b';')?;
    let name = &s[1..end];
    let c = match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        _ => {
            let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                u32::from_str_radix(hex, 16).ok()?
            } else {
                name.strip_prefix('#')?.parse().ok()?
            };
            char::from_u32(code)?
        }
    };
    Some((c, end + 1))
}
