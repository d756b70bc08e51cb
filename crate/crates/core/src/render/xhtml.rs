use super::{prolog, serialize_jsgf, xml, RenderError};
use super::{ITEMS_FIELD, ITEMS_FIELD_ID, VISUAL_LIST_ID, VOICE_FORM_ID};
use crate::dialog::{DialogNode, DialogTree};

const DOCTYPE: &str = "<!DOCTYPE html PUBLIC \"-//VoiceXML Forum//DTD XHTML+Voice 1.2//EN\"\n\
\"http://www.voicexml.org/specs/multimodal/x+v/12/dtd/xhtml+voice12.dtd\">\n";

const HTML_OPEN: &str = "<html xmlns=\"http://www.w3.org/1999/xhtml\"\n\
xmlns:vxml=\"http://www.w3.org/2001/vxml\"\n\
xmlns:ev=\"http://www.w3.org/2001/xml-events\"\n\
xmlns:xv=\"http://www.voicexml.org/2002/xhtml+voice\"\n\
xml:lang=\"en-US\">\n";

const GRAMMAR_INDENT: &str = "            ";

pub(super) fn document(tree: &DialogTree, node: &DialogNode) -> Result<String, RenderError> {
    let jsgf = serialize_jsgf(tree.grammar())?;
    let title = &tree.feed().channel.title;
    let mut out = String::new();
    prolog(&mut out);
    out.push_str(DOCTYPE);
    out.push_str(HTML_OPEN);

    out.push_str("  <head>\n    <title>");
    xml::text(title, &mut out);
    out.push_str("</title>\n");
    out.push_str(&format!("    <vxml:form id=\"{VOICE_FORM_ID}\">\n"));
    out.push_str(&format!(
        "      <vxml:field name=\"{ITEMS_FIELD}\" xv:id=\"{ITEMS_FIELD_ID}\" modal=\"true\">\n"
    ));
    out.push_str("        <vxml:grammar>\n          ");
    let indented: String = jsgf
        .lines()
        .map(|l| format!("\n{GRAMMAR_INDENT}{l}"))
        .chain(std::iter::once("\n          ".to_string()))
        .collect();
    xml::cdata(&indented, &mut out);
    out.push_str("\n        </vxml:grammar>\n");
    out.push_str("        <vxml:prompt bargein=\"true\">");
    xml::text(&node.prompt, &mut out);
    out.push_str("</vxml:prompt>\n");
    out.push_str("      </vxml:field>\n    </vxml:form>\n");
    out.push_str(&format!(
        "    <xv:sync xv:field=\"#{ITEMS_FIELD_ID}\" xv:input=\"{VISUAL_LIST_ID}\"/>\n"
    ));
    out.push_str("  </head>\n");

    out.push_str(&format!("  <body ev:event=\"load\" ev:handler=\"#{VOICE_FORM_ID}\">\n"));
    out.push_str("    <h1>");
    xml::text(title, &mut out);
    out.push_str("</h1>\n");
    out.push_str(&format!(
        "    <select name=\"{VISUAL_LIST_ID}\" id=\"{VISUAL_LIST_ID}\" multiple=\"multiple\" size=\"10\" width=\"100%\">\n"
    ));
    for item in &tree.feed().items {
        out.push_str(&format!("      <option value=\"{}\">", item.index));
        xml::text(&item.title, &mut out);
        out.push_str("</option>\n");
    }
    out.push_str("    </select>\n  </body>\n</html>\n");
    Ok(out)
}
