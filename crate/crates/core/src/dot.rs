//! Graphviz DOT export.
//!
//! Composite blocks become clusters carrying an invisible anchor node, so
//! edges can attach to them via `ltail`/`lhead`. Signal connectors are solid
//! and labelled with the signal; M/H/E interactions are dashed and labelled
//! with their letter. `ext` blocks are grey-filled, `env` blocks
//! double-bordered.

use std::fmt::Write;

use crate::expand::{expand_lenient, expand_view, ExpandedNet, NodeId};
use crate::model::{BlockStereotype, FunctionNet, ViewDoc};

pub fn net_to_dot(net: &FunctionNet) -> String {
    render(&net.name, &net.name, &expand_lenient(net).net)
}

pub fn view_to_dot(view: &ViewDoc) -> String {
    let title = format!("{} ({} view of {})", view.name, view.kind, view.target_net);
    render(&view.name, &title, &expand_view(view).net)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn stereotype_attrs(s: Option<BlockStereotype>) -> &'static str {
    match s {
        Some(BlockStereotype::Ext) => ", style=filled, fillcolor=grey",
        Some(BlockStereotype::Env) => ", peripheries=2",
        None => "",
    }
}

fn label(tree: &ExpandedNet, id: NodeId) -> String {
    let n = tree.node(id);
    let mut text = match &n.instance_of {
        Some(def) => format!("{}: {def}", n.name),
        None => n.name.clone(),
    };
    if let Some(s) = n.stereotype {
        text = format!("<<{}>> {text}", s.keyword());
    }
    text
}

fn indent(out: &mut String, depth: usize) {
    out.push_str(&"  ".repeat(depth));
}

fn emit_block(out: &mut String, tree: &ExpandedNet, id: NodeId, depth: usize) {
    let n = tree.node(id);
    let path = n.path.to_string();
    let attrs = stereotype_attrs(n.stereotype);
    if n.children.is_empty() {
        indent(out, depth);
        let _ = writeln!(
            out,
            "{} [label={}{attrs}];",
            quote(&path),
            quote(&label(tree, id))
        );
        return;
    }
    indent(out, depth);
    let _ = writeln!(out, "subgraph {} {{", quote(&format!("cluster_{path}")));
    indent(out, depth + 1);
    let _ = writeln!(
        out,
        "label={}{};",
        quote(&label(tree, id)),
        attrs.replace(", ", "; ")
    );
    indent(out, depth + 1);
    let _ = writeln!(
        out,
        "{} [shape=point, style=invis, label=\"\"];",
        quote(&path)
    );
    for &child in &n.children {
        emit_block(out, tree, child, depth + 1);
    }
    indent(out, depth);
    out.push_str("}\n");
}

fn render(name: &str, title: &str, tree: &ExpandedNet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    out.push_str("  compound=true;\n  node [shape=box];\n");
    let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster__{name}")));
    let _ = writeln!(out, "    label={};", quote(title));
    for &root in tree.roots() {
        emit_block(&mut out, tree, root, 2);
    }
    out.push_str("  }\n");

    let composite = |id: NodeId| !tree.node(id).children.is_empty();
    for c in tree.connectors() {
        let mut attrs = Vec::new();
        match (c.stereotype, &c.signal) {
            (Some(s), _) => {
                attrs.push("style=dashed".to_owned());
                attrs.push(format!("label={}", quote(s.letter())));
            }
            (None, Some(sig)) => attrs.push(format!("label={}", quote(sig))),
            (None, None) => {}
        }
        // A cluster cannot clip an edge whose other end lies inside it.
        if composite(c.source) && !tree.contains(c.source, c.target) {
            attrs.push(format!(
                "ltail={}",
                quote(&format!("cluster_{}", tree.path(c.source)))
            ));
        }
        if composite(c.target) && !tree.contains(c.target, c.source) {
            attrs.push(format!(
                "lhead={}",
                quote(&format!("cluster_{}", tree.path(c.target)))
            ));
        }
        let _ = write!(
            out,
            "  {} -> {}",
            quote(&tree.path(c.source).to_string()),
            quote(&tree.path(c.target).to_string())
        );
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}
