#![no_main]

use std::sync::Arc;

use libfuzzer_sys::fuzz_target;
use url::Url;
use voxfeed_core::dialog::{DialogTree, ShortcutIndex};
use voxfeed_core::render::{encode_jsgf, render_voicexml, render_xhtml_voice, serialize_jsgf, RenderOptions};
use voxfeed_core::FeedDocument;

// Anything that parses must also compile and render.
fuzz_target!(|data: &[u8]| {
    let url = Url::parse("http://fuzz.example/feed.rss").unwrap();
    let Ok(doc) = FeedDocument::from_bytes(data, &url) else { return };
    if doc.items.is_empty() {
        return;
    }
    let n = doc.items.len();
    ShortcutIndex::build(&doc).expect("non-empty feeds index");
    let tree = DialogTree::build(Arc::new(doc)).expect("non-empty feeds compile");
    assert_eq!(tree.grammar().rules.len(), n);
    let _ = encode_jsgf(&serialize_jsgf(tree.grammar()).unwrap());
    render_xhtml_voice(&tree, "n0").unwrap();
    for node in tree.nodes() {
        render_voicexml(&tree, &node.id, &RenderOptions::default()).unwrap();
    }
});
