//! Escaping for Latin-1 XML output. Characters above U+00FF become
//! numeric character references; characters XML 1.0 forbids are dropped.

use std::fmt::Write;

fn allowed(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

fn latin1(c: char) -> bool {
    (c as u32) <= 0xFF
}

pub(crate) fn text(s: &str, out: &mut String) {
    for c in s.chars().filter(|c| allowed(*c)) {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c if latin1(c) => out.push(c),
            c => {
                let _ = write!(out, "&#x{:X};", c as u32);
            }
        }
    }
}

pub(crate) fn attr(s: &str, out: &mut String) {
    for c in s.chars().filter(|c| allowed(*c)) {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\t' | '\n' | '\r' => {
                let _ = write!(out, "&#{};", c as u32);
            }
            c if latin1(c) => out.push(c),
            c => {
                let _ = write!(out, "&#x{:X};", c as u32);
            }
        }
    }
}

/// Writes `s` as one or more CDATA sections. A section is closed around
/// any `]]>` and around characters that Latin-1 cannot carry, which are
/// emitted as character references between sections.
pub(crate) fn cdata(s: &str, out: &mut String) {
    out.push_str("<![CDATA[");
    let mut rest = s;
    while let Some(c) = rest.chars().next() {
        if rest.starts_with("]]>") {
            out.push_str("]]]]><![CDATA[>");
            rest = &rest[3..];
            continue;
        }
        if allowed(c) {
            if latin1(c) {
                out.push(c);
            } else {
                let _ = write!(out, "]]>&#x{:X};<![CDATA[", c as u32);
            }
        }
        rest = &rest[c.len_utf8()..];
    }
    out.push_str("]]>");
}

/// Latin-1 bytes of a string produced by the writers above.
pub(crate) fn encode_latin1(s: &str) -> Vec<u8> {
    s.chars()
        .map(|c| u8::try_from(c as u32).unwrap_or(b'?'))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: fn(&str, &mut String), s: &str) -> String {
        let mut out = String::new();
        f(s, &mut out);
        out
    }

    fn parsed_text(xml: &str) -> String {
        let doc = roxmltree::Document::parse(xml).unwrap();
        doc.root_element()
            .descendants()
            .filter(|n| n.is_text())
            .filter_map(|n| n.text())
            .collect()
    }

    #[test]
    fn text_escapes() {
        assert_eq!(run(text, "a<b & c>d"), "a&lt;b &amp; c&gt;d");
        assert_eq!(run(text, "café 中"), "café &#x4E2D;");
        assert_eq!(run(text, "bell\u{7}"), "bell");
    }

    #[test]
    fn attr_escapes_quotes() {
        assert_eq!(run(attr, r#"a"b'c"#), "a&quot;b&apos;c");
    }

    #[test]
    fn cdata_round_trips_through_a_parser() {
        for s in ["plain", "x]]>y", "]]>]]>", "中文 and ü", "a]]b>c", ""] {
            let xml = format!("<r>{}</r>", run(cdata, s));
            assert_eq!(parsed_text(&xml), s, "{xml}");
            assert!(xml.chars().all(latin1));
        }
    }

    #[test]
    fn latin1_bytes() {
        assert_eq!(encode_latin1("café"), [b'c', b'a', b'f', 0xE9]);
    }
}
