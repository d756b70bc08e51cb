//! Voice documents for a dialog tree: JSGF grammars, VoiceXML 2.0 forms
//! and XHTML+Voice 1.2 pages. Output is deterministic and Latin-1 clean.

mod jsgf;
mod vxml;
mod xhtml;
mod xml;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use jsgf::{command_jsgf, encode_jsgf, serialize_jsgf, JSGF_HEADER};

use crate::dialog::{DialogTree, NodeKind};

pub const OUTPUT_ENCODING: &str = "iso-8859-1";
pub const VOICE_FORM_ID: &str = "rss_form";
pub const ITEMS_FIELD: &str = "rss_items";
pub const ITEMS_FIELD_ID: &str = "rss_items_name";
pub const COMMAND_FIELD: &str = "rss_command";
pub const VISUAL_LIST_ID: &str = "items";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("grammar has no rules")]
    EmptyGrammar,
    #[error("unknown dialog node {0:?}")]
    UnknownNode(String),
    #[error("node {node:?} is a {kind:?}; only the channel menu renders as XHTML+Voice")]
    WrongNodeKind { node: String, kind: NodeKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediaType {
    VoiceXml,
    XhtmlVoice,
}

impl MediaType {
    pub fn as_str(self) -> &'static str {
        match self {
            MediaType::VoiceXml => "application/voicexml+xml",
            MediaType::XhtmlVoice => "application/xhtml+xml",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedDocument {
    pub media: MediaType,
    pub body: String,
    pub encoding: String,
}

impl RenderedDocument {
    /// `body` encoded as declared in its prolog.
    pub fn to_bytes(&self) -> Vec<u8> {
        xml::encode_latin1(&self.body)
    }

    /// `Content-Type` header value.
    pub fn content_type(&self) -> String {
        format!("{}; charset={}", self.media.as_str(), self.encoding)
    }
}

/// Settings shared by the renderers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    /// Where VoiceXML `<filled>` handlers submit the recognized value.
    /// `{node_id}` is replaced by the rendered node's id.
    pub postback_url: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            postback_url: "input?node={node_id}".to_string(),
        }
    }
}

impl RenderOptions {
    fn postback_for(&self, node_id: &str) -> String {
        self.postback_url.replace("{node_id}", node_id)
    }
}

/// Renders `node_id` as a VoiceXML 2.0 document.
pub fn render_voicexml(
    tree: &DialogTree,
    node_id: &str,
    opts: &RenderOptions,
) -> Result<RenderedDocument, RenderError> {
    let node = tree
        .node(node_id)
        .ok_or_else(|| RenderError::UnknownNode(node_id.to_string()))?;
    let body = vxml::document(tree, node, &opts.postback_for(node_id))?;
    Ok(RenderedDocument {
        media: MediaType::VoiceXml,
        body,
        encoding: OUTPUT_ENCODING.to_string(),
    })
}

/// Renders the channel menu as an XHTML+Voice 1.2 page whose voice field
/// is synchronized with a visual multi-select list of the full titles.
pub fn render_xhtml_voice(tree: &DialogTree, node_id: &str) -> Result<RenderedDocument, RenderError> {
    let node = tree
        .node(node_id)
        .ok_or_else(|| RenderError::UnknownNode(node_id.to_string()))?;
    if node.kind != NodeKind::ChannelMenu {
        return Err(RenderError::WrongNodeKind {
            node: node.id.clone(),
            kind: node.kind,
        });
    }
    Ok(RenderedDocument {
        media: MediaType::XhtmlVoice,
        body: xhtml::document(tree, node)?,
        encoding: OUTPUT_ENCODING.to_string(),
    })
}

fn prolog(out: &mut String) {
    out.push_str("<?xml version=\"1.0\" encoding=\"");
    out.push_str(OUTPUT_ENCODING);
    out.push_str("\"?>\n");
}
