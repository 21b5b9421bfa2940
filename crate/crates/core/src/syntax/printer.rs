//! Canonical `.fnet` formatting.
//!
//! Two-space indentation, one statement per line, LF line endings, a blank
//! line between documents. Inside a body: defs, then blocks (declaration
//! order), then connectors.

use std::fmt::Write;

use super::{Document, FeatureList, VariantGroup};
use crate::model::{
    BlockDef, BlockKind, BlockNode, Connector, FunctionNet, ModeBinding, ModeMachine, Model,
    Trigger, ViewDoc, ViewKind,
};

/// Prints a whole model as one canonical document stream: the net, then
/// views, machines, variant groups and the feature list.
pub fn print_model(model: &Model) -> String {
    let mut docs = vec![Document::Net(model.net.clone())];
    docs.extend(model.views.values().cloned().map(Document::View));
    docs.extend(model.machines.values().cloned().map(Document::Modes));
    for (name, members) in &model.variant_groups {
        docs.push(Document::Variants(VariantGroup {
            name: name.clone(),
            target_net: model.net.name.clone(),
            members: members
                .iter()
                .map(|m| (m.clone(), Default::default()))
                .collect(),
            span: Default::default(),
        }));
    }
    if !model.feature_views.is_empty() {
        docs.push(Document::Features(FeatureList {
            target_net: model.net.name.clone(),
            members: model
                .feature_views
                .iter()
                .map(|m| (m.clone(), Default::default()))
                .collect(),
            span: Default::default(),
        }));
    }
    print_documents(&docs)
}

pub fn print_documents(docs: &[Document]) -> String {
    let mut out = String::new();
    for (i, doc) in docs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match doc {
            Document::Net(net) => print_net(&mut out, net),
            Document::View(view) => print_view(&mut out, view),
            Document::Modes(machine) => print_machine(&mut out, machine),
            Document::Variants(g) => print_members(
                &mut out,
                &format!("variants {} for {}", g.name, g.target_net),
                "variant",
                &g.members,
            ),
            Document::Features(f) => print_members(
                &mut out,
                &format!("features for {}", f.target_net),
                "feature",
                &f.members,
            ),
        }
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// `header {` + body + `}`; empty bodies collapse to `header {}`.
fn print_body(
    out: &mut String,
    depth: usize,
    header: &str,
    defs: &[&BlockDef],
    blocks: &[BlockNode],
    connectors: &[Connector],
) {
    indent(out, depth);
    out.push_str(header);
    if defs.is_empty() && blocks.is_empty() && connectors.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    for def in defs {
        print_body(
            out,
            depth + 1,
            &format!("def {}", def.name),
            &[],
            &def.children,
            &def.connectors,
        );
    }
    for block in blocks {
        print_block(out, depth + 1, block);
    }
    for c in connectors {
        indent(out, depth + 1);
        out.push_str(&c.describe());
        out.push_str(";\n");
    }
    indent(out, depth);
    out.push_str("}\n");
}

fn print_block(out: &mut String, depth: usize, block: &BlockNode) {
    let stereo = block
        .stereotype
        .map(|s| format!("{} ", s.keyword()))
        .unwrap_or_default();
    match &block.kind {
        BlockKind::Instance { def_ref } => {
            indent(out, depth);
            let _ = writeln!(out, "{stereo}use {}: {def_ref};", block.name);
        }
        BlockKind::Plain {
            children,
            connectors,
        } if children.is_empty() && connectors.is_empty() => {
            indent(out, depth);
            let _ = writeln!(out, "{stereo}block {};", block.name);
        }
        BlockKind::Plain {
            children,
            connectors,
        } => print_body(
            out,
            depth,
            &format!("{stereo}block {}", block.name),
            &[],
            children,
            connectors,
        ),
    }
}

fn print_net(out: &mut String, net: &FunctionNet) {
    let defs: Vec<&BlockDef> = net.defs.values().collect();
    print_body(
        out,
        0,
        &format!("net {}", net.name),
        &defs,
        &net.roots,
        &net.connectors,
    );
}

fn print_view(out: &mut String, view: &ViewDoc) {
    let header = match view.kind {
        ViewKind::Generic => format!("view {} for {}", view.name, view.target_net),
        kind => format!(
            "view {} {} for {}",
            view.name,
            kind.keyword(),
            view.target_net
        ),
    };
    print_body(out, 0, &header, &[], &view.roots, &view.connectors);
}

fn print_machine(out: &mut String, machine: &ModeMachine) {
    let _ = writeln!(out, "modes {} for {} {{", machine.name, machine.target_net);
    let binding = |b: &ModeBinding| match b {
        ModeBinding::Complete => "complete".to_owned(),
        ModeBinding::View(v) => format!("view {v}"),
    };
    if let Some(initial) = machine.modes.get(&machine.initial) {
        let _ = writeln!(
            out,
            "  initial mode {} uses {};",
            initial.name,
            binding(&initial.binding)
        );
    }
    for mode in machine.modes.values().filter(|m| m.name != machine.initial) {
        let _ = writeln!(out, "  mode {} uses {};", mode.name, binding(&mode.binding));
    }
    for t in &machine.transitions {
        let _ = writeln!(
            out,
            "  {} -> {} when {};",
            t.source,
            t.target,
            trigger_text(&t.trigger)
        );
    }
    out.push_str("}\n");
}

fn print_members(
    out: &mut String,
    header: &str,
    item: &str,
    members: &[(String, crate::span::SourceSpan)],
) {
    if members.is_empty() {
        let _ = writeln!(out, "{header} {{}}");
        return;
    }
    let _ = writeln!(out, "{header} {{");
    for (name, _) in members {
        let _ = writeln!(out, "  {item} {name};");
    }
    out.push_str("}\n");
}

/// Renders a trigger, parenthesising only where the tree shape needs it.
pub(crate) fn trigger_text(trigger: &Trigger) -> String {
    match trigger {
        Trigger::Fault { signal, .. } => format!("fault({signal})"),
        Trigger::Event { name, .. } => name.clone(),
        Trigger::Not(inner) => match **inner {
            Trigger::And(_) | Trigger::Or(_) => format!("not ({})", trigger_text(inner)),
            _ => format!("not {}", trigger_text(inner)),
        },
        Trigger::And(items) => items
            .iter()
            .map(|t| match t {
                Trigger::And(_) | Trigger::Or(_) => format!("({})", trigger_text(t)),
                _ => trigger_text(t),
            })
            .collect::<Vec<_>>()
            .join(" and "),
        Trigger::Or(items) => items
            .iter()
            .map(|t| match t {
                Trigger::Or(_) => format!("({})", trigger_text(t)),
                _ => trigger_text(t),
            })
            .collect::<Vec<_>>()
            .join(" or "),
    }
}
