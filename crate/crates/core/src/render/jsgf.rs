use std::fmt::Write;

use super::RenderError;
use crate::dialog::{Command, Grammar};

pub const JSGF_HEADER: &str = "#JSGF V1.0 iso-8859-1;";

/// Serializes the item grammar.
///
/// The public `<items>` rule accepts one or more `<item>` references and
/// collects their tags into an array; `<item>` lists one alternative per
/// rule as `phrase ( $="tag" )`, one per line, separated by `|`.
pub fn serialize_jsgf(grammar: &Grammar) -> Result<String, RenderError> {
    if grammar.rules.is_empty() {
        return Err(RenderError::EmptyGrammar);
    }
    let alternatives: Vec<String> = grammar
        .rules
        .iter()
        .map(|r| format!("{} ( $=\"{}\" )", r.text(), r.tag))
        .collect();
    let mut out = String::new();
    out.push_str(JSGF_HEADER);
    out.push('\n');
    let _ = writeln!(out, "grammar {};", grammar.name);
    out.push_str("public <items> = <NULL> ( $% new Array; ) ( <item> [and] ( $%push($item) ) )+;\n");
    out.push_str("<item> = ");
    out.push_str(&alternatives.join(" |\n  "));
    out.push_str(" ;\n");
    Ok(out)
}

/// Bytes of a grammar for a standalone `.jsgf` file in the encoding its
/// header declares. Characters outside Latin-1 become Java-style `\uXXXX`
/// escapes (surrogate pairs above the BMP).
pub fn encode_jsgf(text: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(text.len());
    for c in text.chars() {
        if (c as u32) <= 0xFF {
            out.push(c as u8);
        } else {
            let mut units = [0u16; 2];
            for u in c.encode_utf16(&mut units) {
                out.extend_from_slice(format!("\\u{u:04X}").as_bytes());
            }
        }
    }
    out
}

/// Grammar for the navigation commands accepted at item and link nodes.
pub fn command_jsgf() -> String {
    let alternatives: Vec<String> = Command::ALL
        .iter()
        .map(|c| format!("{c} ( $=\"{c}\" )"))
        .collect();
    format!(
        "{JSGF_HEADER}\ngrammar commands;\npublic <command> = {} ;\n",
        alternatives.join(" | ")
    )
}
