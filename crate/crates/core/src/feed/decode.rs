use std::borrow::Cow;

use encoding_rs::Encoding;

use super::FeedError;

/// Decodes raw feed bytes to text.
///
/// A byte-order mark wins; otherwise the `encoding` pseudo-attribute of the
/// XML declaration is honored; otherwise UTF-8 is assumed. Undecodable bytes
/// become U+FFFD rather than failing the whole feed.
pub fn decode_document(body: &[u8]) -> Result<Cow<'_, str>, FeedError> {
    if let Some((encoding, bom_len)) = Encoding::for_bom(body) {
        let (text, _) = encoding.decode_without_bom_handling(&body[bom_len..]);
        return Ok(text);
    }
    let encoding = match declared_encoding(body) {
        Some(label) => Encoding::for_label(label.as_bytes())
            .ok_or_else(|| FeedError::Xml(format!("unsupported encoding {label:?}")))?
            // UTF-16 without a BOM cannot have produced an ASCII declaration.
            .output_encoding(),
        None => encoding_rs::UTF_8,
    };
    let (text, _) = encoding.decode_without_bom_handling(body);
    Ok(text)
}

fn declared_encoding(body: &[u8]) -> Option<String> {
    if !body.starts_with(b"<?xml") {
        return None;
    }
    let head = &body[..body.len().min(512)];
    let end = head.windows(2).position(|w| w == b"?>")?;
    let decl = std::str::from_utf8(&head[5..end]).ok()?;
    let at = decl.find("encoding")?;
    let rest = decl[at + "encoding".len()..].trim_start();
    let rest = rest.strip_prefix('=')?.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'')?;
    let value = &rest[1..];
    let close = value.find(quote)?;
    Some(value[..close].to_string())
}
