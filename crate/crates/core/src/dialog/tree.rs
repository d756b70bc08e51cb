use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use url::Url;

use super::{DialogError, Grammar};
use crate::feed::FeedDocument;

pub const ROOT_ID: &str = "n0";
pub const ROOT_PROMPT: &str = "Please say the items.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    ChannelMenu,
    ItemDetail,
    LinkFollow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogNode {
    pub id: String,
    pub kind: NodeKind,
    pub prompt: String,
    pub item_index: Option<usize>,
    pub children: Vec<String>,
    /// Child ordinals from the root; empty for the root itself.
    pub path: Vec<usize>,
}

/// Node id for a path: `n0`, `n0.<item>`, `n0.<item>.1`.
pub fn node_id(path: &[usize]) -> String {
    let mut id = ROOT_ID.to_string();
    for step in path {
        id.push('.');
        id.push_str(&step.to_string());
    }
    id
}

/// Every dialog route through one feed: the channel menu, one detail node
/// per item and one link node per linked item.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogTree {
    feed: Arc<FeedDocument>,
    nodes: BTreeMap<String, DialogNode>,
    grammar: Grammar,
}

impl DialogTree {
    pub fn build(feed: Arc<FeedDocument>) -> Result<Self, DialogError> {
        let grammar = Grammar::generate(&feed)?;
        let mut nodes = BTreeMap::new();
        let mut root = DialogNode {
            id: ROOT_ID.to_string(),
            kind: NodeKind::ChannelMenu,
            prompt: ROOT_PROMPT.to_string(),
            item_index: None,
            children: Vec::with_capacity(feed.items.len()),
            path: Vec::new(),
        };
        for item in &feed.items {
            let path = vec![item.index];
            let id = node_id(&path);
            let mut prompt = item.title.clone();
            if let Some(desc) = &item.description {
                prompt.push_str(". ");
                prompt.push_str(desc);
            }
            let mut children = Vec::new();
            if item.link.is_some() {
                let link_path = vec![item.index, 1];
                let link_id = node_id(&link_path);
                children.push(link_id.clone());
                nodes.insert(
                    link_id.clone(),
                    DialogNode {
                        id: link_id,
                        kind: NodeKind::LinkFollow,
                        prompt: format!("Follow link to {}?", item.title),
                        item_index: Some(item.index),
                        children: Vec::new(),
                        path: link_path,
                    },
                );
            }
            root.children.push(id.clone());
            nodes.insert(
                id.clone(),
                DialogNode {
                    id,
                    kind: NodeKind::ItemDetail,
                    prompt,
                    item_index: Some(item.index),
                    children,
                    path,
                },
            );
        }
        nodes.insert(ROOT_ID.to_string(), root);
        Ok(Self {
            feed,
            nodes,
            grammar,
        })
    }

    pub fn feed(&self) -> &Arc<FeedDocument> {
        &self.feed
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn root(&self) -> &DialogNode {
        &self.nodes[ROOT_ID]
    }

    pub fn node(&self, id: &str) -> Option<&DialogNode> {
        self.nodes.get(id)
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&DialogNode> {
        self.nodes.get(&node_id(path))
    }

    pub fn nodes(&self) -> impl Iterator<Item = &DialogNode> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn item_count(&self) -> usize {
        self.feed.items.len()
    }

    pub fn parent(&self, node: &DialogNode) -> Option<&DialogNode> {
        let (_, up) = node.path.split_last()?;
        self.node_at(up)
    }

    /// The link of the item a node belongs to, if any.
    pub fn link_of(&self, node: &DialogNode) -> Option<&Url> {
        node.item_index
            .and_then(|i| self.feed.item(i))
            .and_then(|item| item.link.as_ref())
    }
}
