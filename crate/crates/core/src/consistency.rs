//! Well-formedness of complete nets and consistency of views against them.
//!
//! # Identifying view blocks
//!
//! A view names blocks, not nodes, and may skip hierarchy layers, so each
//! view block is matched to a node of the expanded net by name:
//!
//! * exactly one net node carries the name: that node;
//! * several do: keep those whose root-to-node path contains the view's
//!   root-to-block name sequence as a subsequence; exactly one must remain,
//!   otherwise the block is ambiguous and needs a fuller path.
//!
//! `env` blocks are never identified. `ext` blocks are identified with the
//! same rule but are exempt from existing in the net.
//!
//! # Connector matching
//!
//! A view endpoint `v` matches a net endpoint `n` when `v` is identified with
//! `n`, or with a proper ancestor of `n` while `n` itself is not shown in the
//! view. A view connector is satisfied by a net connector whose endpoints
//! both match and whose signal equals the view's (any signal when the view
//! omits it).

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diagnostics::{CheckReport, Code, Diagnostic, Target};
use crate::expand::{
    expand_lenient, expand_view, recursive_defs, Endpoint, ExpandIssue, ExpandedNet, NodeId,
};
use crate::model::{
    describe_edge, BlockKind, BlockNode, BlockPath, BlockStereotype, Connector, FunctionNet, Model,
    ViewDoc,
};

/// How one view block relates to the complete net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    Identified(NodeId),
    /// No net block carries the name.
    Unknown,
    /// Several net blocks fit; the candidates are listed.
    Ambiguous(Vec<NodeId>),
    /// `env` blocks stand for physical elements outside the net.
    Environment,
}

impl Identification {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Identification::Identified(n) => Some(*n),
            _ => None,
        }
    }
}

/// A view's flattened block tree and the identification of each block.
#[derive(Debug, Clone)]
pub struct ViewIdentification {
    /// The view's blocks and connectors in expanded form.
    pub tree: ExpandedNet,
    /// Indexed by the view tree's node ids.
    pub blocks: Vec<Identification>,
}

impl ViewIdentification {
    pub fn of(&self, view_node: NodeId) -> &Identification {
        &self.blocks[view_node.index()]
    }

    /// Net nodes identified with unstereotyped view blocks: the blocks the
    /// view actually covers.
    pub fn covered(&self) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .tree
            .nodes()
            .filter(|(_, n)| n.stereotype.is_none())
            .filter_map(|(id, _)| self.of(id).node())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Net nodes shown by any view block, context blocks included.
    pub fn shown(&self) -> HashSet<NodeId> {
        self.blocks
            .iter()
            .filter_map(Identification::node)
            .collect()
    }
}

fn is_subsequence(needle: &[String], hay: &[String]) -> bool {
    let mut hay = hay.iter();
    needle.iter().all(|seg| hay.any(|h| h == seg))
}

/// Identifies every block of `view` against the expanded complete net.
pub fn identify(view: &ViewDoc, net: &ExpandedNet) -> ViewIdentification {
    identify_tree(expand_view(view).net, net)
}

fn identify_tree(tree: ExpandedNet, net: &ExpandedNet) -> ViewIdentification {
    let mut by_name: HashMap<&str, Vec<NodeId>> = HashMap::new();
    for (id, node) in net.nodes() {
        by_name.entry(node.name.as_str()).or_default().push(id);
    }
    let mut blocks = vec![Identification::Unknown; tree.len()];
    for (id, node) in tree.nodes() {
        blocks[id.index()] = if node.stereotype == Some(BlockStereotype::Env) {
            Identification::Environment
        } else {
            match by_name.get(node.name.as_str()).map(Vec::as_slice) {
                None | Some([]) => Identification::Unknown,
                Some([only]) => Identification::Identified(*only),
                Some(candidates) => {
                    let fitting: Vec<NodeId> = candidates
                        .iter()
                        .copied()
                        .filter(|c| is_subsequence(node.path.segments(), net.path(*c).segments()))
                        .collect();
                    match fitting.as_slice() {
                        [only] => Identification::Identified(*only),
                        [] => Identification::Ambiguous(candidates.to_vec()),
                        _ => Identification::Ambiguous(fitting),
                    }
                }
            }
        };
    }
    ViewIdentification { tree, blocks }
}

/// Reports a duplicate sibling name at its second occurrence.
fn duplicate_siblings(blocks: &[BlockNode], scope: Option<&BlockPath>, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for b in blocks {
        let path = scope.map_or_else(|| BlockPath::single(&b.name), |s| s.child(&b.name));
        if !seen.insert(b.name.as_str()) {
            out.push(Diagnostic::error(
                Code::WF01,
                &b.span,
                path.to_string(),
                format!("duplicate block name `{}` among siblings", b.name),
            ));
        }
        duplicate_siblings(b.children(), Some(&path), out);
    }
}

/// Calls `f` for every block and connector declared below `blocks`.
fn walk_declared<'a>(
    blocks: &'a [BlockNode],
    connectors: &'a [Connector],
    f: &mut dyn FnMut(Option<&'a BlockNode>, Option<&'a Connector>),
) {
    for c in connectors {
        f(None, Some(c));
    }
    for b in blocks {
        f(Some(b), None);
        walk_declared(b.children(), b.connectors(), f);
    }
}

fn self_connector(c: &Connector) -> Option<Diagnostic> {
    (c.source == c.target).then(|| {
        Diagnostic::warning(
            Code::WF02,
            &c.span,
            c.describe(),
            format!("self-connector on `{}`", c.source),
        )
    })
}

fn unresolved_endpoints(issues: &[ExpandIssue], out: &mut Vec<Diagnostic>) {
    for issue in issues {
        if let ExpandIssue::UnresolvedEndpoint {
            connector,
            endpoint,
            error,
        } = issue
        {
            let which = match endpoint {
                Endpoint::Source => "source",
                Endpoint::Target => "target",
            };
            let hint = match &error.prefix {
                Some(p) => format!(" (resolves up to `{p}`)"),
                None => String::new(),
            };
            out.push(Diagnostic::error(
                Code::WF02,
                &connector.span,
                connector.describe(),
                format!("{which} `{}` does not resolve to a block{hint}", error.path),
            ));
        }
    }
}

/// Well-formedness of a complete function net.
pub fn check_net(net: &FunctionNet) -> CheckReport {
    let mut out = Vec::new();

    duplicate_siblings(&net.roots, None, &mut out);
    for def in net.defs.values() {
        duplicate_siblings(&def.children, None, &mut out);
    }

    let expansion = expand_lenient(net);
    unresolved_endpoints(&expansion.issues, &mut out);
    for issue in &expansion.issues {
        if let ExpandIssue::UnresolvedDef { name, span } = issue {
            out.push(Diagnostic::error(
                Code::WF05,
                span,
                name.clone(),
                format!("unknown def `{name}`"),
            ));
        }
    }

    let mut visit = |block: Option<&BlockNode>, connector: Option<&Connector>| {
        if let Some(b) = block {
            if let Some(s) = b.stereotype {
                out.push(Diagnostic::error(
                    Code::WF04,
                    &b.span,
                    b.name.clone(),
                    format!(
                        "`{}` blocks belong in views, not in the complete net",
                        s.keyword()
                    ),
                ));
            }
        }
        if let Some(c) = connector {
            out.extend(self_connector(c));
            if c.signal.is_none() {
                out.push(Diagnostic::error(
                    Code::WF03,
                    &c.span,
                    c.describe(),
                    "connector in the complete net carries no signal",
                ));
            }
            if let Some(s) = c.stereotype {
                out.push(Diagnostic::error(
                    Code::WF04,
                    &c.span,
                    c.describe(),
                    format!(
                        "`{}` interaction belongs in views, not in the complete net",
                        s.letter()
                    ),
                ));
            }
        }
    };
    walk_declared(&net.roots, &net.connectors, &mut visit);
    for def in net.defs.values() {
        walk_declared(&def.children, &def.connectors, &mut visit);
    }

    for rec in recursive_defs(net) {
        out.push(Diagnostic::error(
            Code::WF05,
            &rec.span,
            rec.def.clone(),
            format!(
                "def `{}` instantiates itself ({})",
                rec.def,
                rec.cycle.join(" -> ")
            ),
        ));
    }

    CheckReport::new(Target::net(&net.name), out)
}

/// Consistency of `view` with the complete net `net`.
pub fn check_view(view: &ViewDoc, net: &FunctionNet) -> CheckReport {
    let expanded = expand_lenient(net).net;
    check_view_against(view, &expanded)
}

/// As [`check_view`], against an already expanded net.
pub fn check_view_against(view: &ViewDoc, net: &ExpandedNet) -> CheckReport {
    let mut out = Vec::new();
    let expansion = expand_view(view);

    if view.roots.is_empty() {
        out.push(Diagnostic::error(
            Code::V01,
            &view.span,
            view.name.clone(),
            "view contains no block",
        ));
    }
    walk_declared(&view.roots, &view.connectors, &mut |block, connector| {
        if let Some(b) = block {
            if let BlockKind::Instance { def_ref } = &b.kind {
                out.push(Diagnostic::error(
                    Code::V01,
                    &b.span,
                    b.name.clone(),
                    format!(
                        "views show instances as plain blocks, not `use {}: {def_ref}`",
                        b.name
                    ),
                ));
            }
            if b.stereotype.is_some() && !b.children().is_empty() {
                out.push(Diagnostic::error(
                    Code::V01,
                    &b.span,
                    b.name.clone(),
                    "`ext` and `env` blocks are opaque and cannot contain blocks",
                ));
            }
        }
        if let Some(c) = connector {
            out.extend(self_connector(c));
        }
    });
    duplicate_siblings(&view.roots, None, &mut out);
    unresolved_endpoints(&expansion.issues, &mut out);

    let ident = identify_tree(expansion.net, net);
    let tree = &ident.tree;
    let plain = |id: NodeId| tree.node(id).stereotype.is_none();

    // C1
    for (id, node) in tree.nodes().filter(|(id, _)| plain(*id)) {
        let candidates = match ident.of(id) {
            Identification::Unknown => {
                out.push(Diagnostic::error(
                    Code::C1,
                    &node.span,
                    node.path.to_string(),
                    format!(
                        "block `{}` is not part of the complete net `{}`",
                        node.name, net.name
                    ),
                ));
                continue;
            }
            Identification::Ambiguous(candidates) => candidates,
            _ => continue,
        };
        let listed: Vec<String> = candidates
            .iter()
            .map(|c| net.path(*c).to_string())
            .collect();
        out.push(Diagnostic::error(
            Code::C1,
            &node.span,
            node.path.to_string(),
            format!(
                "block `{}` matches several blocks of `{}` ({}); give a fuller path",
                node.name,
                net.name,
                listed.join(", ")
            ),
        ));
    }

    // C2: every shown whole-part edge exists, possibly across omitted layers.
    for (id, node) in tree.nodes().filter(|(id, _)| plain(*id)) {
        let Some(parent) = node.parent.filter(|p| plain(*p)) else {
            continue;
        };
        if let (Some(np), Some(nc)) = (ident.of(parent).node(), ident.of(id).node()) {
            if !net.contains(np, nc) {
                out.push(Diagnostic::error(
                    Code::C2,
                    &node.span,
                    node.path.to_string(),
                    format!(
                        "shown inside `{}`, but `{}` is not part of `{}` in the complete net",
                        tree.node(parent).name,
                        net.path(nc),
                        net.path(np)
                    ),
                ));
            }
        }
    }

    // C3: containment between shown blocks must survive in the view.
    let identified: Vec<(NodeId, NodeId)> = tree
        .nodes()
        .filter(|(id, _)| plain(*id))
        .filter_map(|(id, _)| ident.of(id).node().map(|n| (id, n)))
        .collect();
    for &(v, nv) in &identified {
        for &(u, nu) in &identified {
            if u != v && net.contains(nu, nv) && !tree.contains(u, v) {
                out.push(Diagnostic::error(
                    Code::C3,
                    &tree.node(v).span,
                    tree.path(v).to_string(),
                    format!(
                        "`{}` is part of `{}` in the complete net, but not inside `{}` in the view",
                        net.path(nv),
                        net.path(nu),
                        tree.path(u)
                    ),
                ));
            }
        }
    }

    // C4 / C5
    let shown = ident.shown();
    for vc in tree.connectors() {
        if vc.stereotype.is_some() {
            continue;
        }
        let (s, t) = (vc.source, vc.target);
        let stereo = |id: NodeId| tree.node(id).stereotype;
        if stereo(s) == Some(BlockStereotype::Env) || stereo(t) == Some(BlockStereotype::Env) {
            continue;
        }
        // Unidentified ext endpoints are exempt; unidentified plain ones
        // already carry a C1.
        let (Some(ns), Some(nt)) = (ident.of(s).node(), ident.of(t).node()) else {
            continue;
        };
        let signal_ok = |sig: &Option<String>| vc.signal.is_none() || *sig == vc.signal;
        let exact = |x: NodeId, n: NodeId| x == n || (net.contains(x, n) && !shown.contains(&n));
        let relaxed = |x: NodeId, n: NodeId| x == n || net.contains(x, n);
        let describe = || {
            describe_edge(
                &tree.path(s).to_string(),
                &tree.path(t).to_string(),
                vc.signal.as_deref(),
                None,
            )
        };
        if net
            .connectors()
            .iter()
            .any(|nc| signal_ok(&nc.signal) && exact(ns, nc.source) && exact(nt, nc.target))
        {
            continue;
        }
        let near = net
            .connectors()
            .iter()
            .find(|nc| signal_ok(&nc.signal) && relaxed(ns, nc.source) && relaxed(nt, nc.target));
        match near {
            Some(nc) => {
                let (lifted, exact_end) = if ns != nc.source && shown.contains(&nc.source) {
                    (ns, nc.source)
                } else {
                    (nt, nc.target)
                };
                out.push(Diagnostic::error(
                    Code::C5,
                    &vc.span,
                    describe(),
                    format!(
                        "drawn to super-block `{}`, but the exact endpoint `{}` is shown in the view",
                        net.path(lifted),
                        net.path(exact_end)
                    ),
                ));
            }
            None => {
                let what = match &vc.signal {
                    Some(sig) => format!("signal `{sig}`"),
                    None => "any signal".to_owned(),
                };
                out.push(Diagnostic::error(
                    Code::C4,
                    &vc.span,
                    describe(),
                    format!(
                        "no connector `{}` -> `{}` with {what} in the complete net",
                        net.path(ns),
                        net.path(nt)
                    ),
                ));
            }
        }
    }

    CheckReport::new(Target::view(&view.name), out)
}

/// Checks the net, every view and every mode machine.
pub fn check_all(model: &Model) -> BTreeMap<Target, CheckReport> {
    let mut reports = BTreeMap::new();
    reports.insert(Target::net(&model.net.name), check_net(&model.net));
    let expanded = expand_lenient(&model.net).net;
    let view_reports: HashMap<&str, CheckReport> = model
        .views
        .values()
        .map(|v| (v.name.as_str(), check_view_against(v, &expanded)))
        .collect();
    for machine in model.machines.values() {
        let report = crate::modes::check_machine_with(machine, model, &expanded, &|name| {
            view_reports.get(name)
        });
        reports.insert(Target::machine(&machine.name), report);
    }
    for (name, report) in view_reports {
        reports.insert(Target::view(name), report);
    }
    reports
}
