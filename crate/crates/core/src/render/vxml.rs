use super::{command_jsgf, prolog, serialize_jsgf, xml, RenderError};
use super::{COMMAND_FIELD, ITEMS_FIELD, VOICE_FORM_ID};
use crate::dialog::{DialogNode, DialogTree, NodeKind};

pub(super) fn document(
    tree: &DialogTree,
    node: &DialogNode,
    postback: &str,
) -> Result<String, RenderError> {
    let items_grammar = serialize_jsgf(tree.grammar())?;
    let mut out = String::new();
    prolog(&mut out);
    out.push_str("<vxml version=\"2.0\" xmlns=\"http://www.w3.org/2001/vxml\" xml:lang=\"en-US\">\n");
    out.push_str("  <form id=\"");
    out.push_str(VOICE_FORM_ID);
    out.push_str("\">\n");

    let field = match node.kind {
        NodeKind::ChannelMenu => ITEMS_FIELD,
        NodeKind::ItemDetail | NodeKind::LinkFollow => COMMAND_FIELD,
    };
    out.push_str("    <field name=\"");
    out.push_str(field);
    out.push_str("\">\n");

    if node.kind != NodeKind::ChannelMenu {
        grammar(&command_jsgf(), &mut out);
    }
    grammar(&items_grammar, &mut out);

    out.push_str("      <prompt bargein=\"true\">");
    xml::text(&node.prompt, &mut out);
    if node.kind == NodeKind::ChannelMenu {
        for rule in &tree.grammar().rules {
            out.push(' ');
            xml::text(&rule.text(), &mut out);
            out.push('.');
        }
    }
    out.push_str("</prompt>\n");

    out.push_str("      <filled>\n        <submit next=\"");
    xml::attr(postback, &mut out);
    out.push_str("\" namelist=\"");
    out.push_str(field);
    out.push_str("\" method=\"post\"/>\n      </filled>\n");
    out.push_str("    </field>\n  </form>\n</vxml>\n");
    Ok(out)
}

fn grammar(jsgf: &str, out: &mut String) {
    out.push_str("      <grammar mode=\"voice\" type=\"application/x-jsgf\">");
    xml::cdata(jsgf, out);
    out.push_str("</grammar>\n");
}
