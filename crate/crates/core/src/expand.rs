//! Instantiation of block defs and resolution of block paths.
//!
//! [`expand`] turns a [`FunctionNet`] into an [`ExpandedNet`]: an arena of
//! concrete nodes in which every `use name: Def` has been replaced by a fresh
//! copy of the def's subtree and every connector endpoint points at a node.

use std::collections::{BTreeSet, HashSet, VecDeque};

use indexmap::IndexMap;

use crate::model::{
    describe_edge, BlockDef, BlockKind, BlockNode, BlockPath, BlockStereotype, Connector,
    FunctionNet, Interaction, StripSpans, ViewDoc,
};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedNode {
    pub name: String,
    pub path: BlockPath,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub stereotype: Option<BlockStereotype>,
    /// Def this node instantiates, for instance roots.
    pub instance_of: Option<String>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedConnector {
    pub source: NodeId,
    pub target: NodeId,
    pub signal: Option<String>,
    pub stereotype: Option<Interaction>,
    pub span: SourceSpan,
}

/// Fully instantiated block forest with resolved connectors.
#[derive(Debug, Clone)]
pub struct ExpandedNet {
    pub name: String,
    nodes: Vec<ExpandedNode>,
    roots: Vec<NodeId>,
    connectors: Vec<ExpandedConnector>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown block path `{path}`{}", match .prefix {
    Some(p) => format!(" (resolvable prefix `{p}`)"),
    None => String::new(),
})]
pub struct UnknownPath {
    pub path: BlockPath,
    /// Longest prefix of `path` that does resolve.
    pub prefix: Option<BlockPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("def `{0}` instantiates itself")]
    RecursiveInstantiation(String),
    #[error("unknown def `{0}`")]
    UnresolvedDef(String),
    #[error(transparent)]
    UnknownPath(#[from] UnknownPath),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Endpoint {
    Source,
    Target,
}

/// Problems found while expanding leniently.
#[derive(Debug, Clone)]
pub(crate) enum ExpandIssue {
    UnresolvedDef {
        name: String,
        span: SourceSpan,
    },
    /// Instance left as a leaf because its def is already being expanded.
    RecursiveInstance {
        def: String,
    },
    UnresolvedEndpoint {
        connector: Connector,
        endpoint: Endpoint,
        error: UnknownPath,
    },
}

pub(crate) struct Expansion {
    pub net: ExpandedNet,
    pub issues: Vec<ExpandIssue>,
}

/// A def that reaches itself through instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveDef {
    pub def: String,
    /// `def -> .. -> def`.
    pub cycle: Vec<String>,
    pub span: SourceSpan,
}

/// Expands every instance of `net` and resolves every connector endpoint.
pub fn expand(net: &FunctionNet) -> Result<ExpandedNet, ExpandError> {
    if let Some(rec) = recursive_defs(net).into_iter().next() {
        return Err(ExpandError::RecursiveInstantiation(rec.def));
    }
    let Expansion { net, issues } = expand_lenient(net);
    match issues.into_iter().next() {
        None => Ok(net),
        Some(ExpandIssue::UnresolvedDef { name, .. }) => Err(ExpandError::UnresolvedDef(name)),
        Some(ExpandIssue::RecursiveInstance { def }) => {
            Err(ExpandError::RecursiveInstantiation(def))
        }
        Some(ExpandIssue::UnresolvedEndpoint { error, .. }) => Err(error.into()),
    }
}

pub(crate) fn expand_lenient(net: &FunctionNet) -> Expansion {
    Expander::new(&net.defs).run(&net.name, &net.roots, &net.connectors)
}

/// Flattens a view's nested blocks into the same arena shape as a net.
pub(crate) fn expand_view(view: &ViewDoc) -> Expansion {
    let no_defs = IndexMap::new();
    Expander::new(&no_defs).run(&view.name, &view.roots, &view.connectors)
}

/// Every def lying on an instantiation cycle, in declaration order.
pub fn recursive_defs(net: &FunctionNet) -> Vec<RecursiveDef> {
    fn uses(def: &BlockDef) -> Vec<&str> {
        let mut out = Vec::new();
        collect_def_refs(&def.children, &mut out);
        out
    }
    let mut found = Vec::new();
    for (name, def) in &net.defs {
        // BFS over the def graph looking for a path back to `name`.
        let mut queue = VecDeque::new();
        let mut came_from: IndexMap<&str, &str> = IndexMap::new();
        for next in uses(def) {
            if !came_from.contains_key(next) {
                came_from.insert(next, name);
                queue.push_back(next);
            }
        }
        let mut hit = false;
        while let Some(cur) = queue.pop_front() {
            if cur == name {
                hit = true;
                break;
            }
            if let Some(d) = net.defs.get(cur) {
                for next in uses(d) {
                    if !came_from.contains_key(next) {
                        came_from.insert(next, cur);
                        queue.push_back(next);
                    }
                }
            }
        }
        if hit {
            let mut cycle = vec![name.clone()];
            let mut cur = came_from[name.as_str()];
            while cur != name {
                cycle.push(cur.to_owned());
                cur = came_from[cur];
            }
            let len = cycle.len();
            cycle[1..len].reverse();
            cycle.push(name.clone());
            found.push(RecursiveDef {
                def: name.clone(),
                cycle,
                span: def.span.clone(),
            });
        }
    }
    found
}

fn collect_def_refs<'a>(blocks: &'a [BlockNode], out: &mut Vec<&'a str>) {
    for b in blocks {
        match &b.kind {
            BlockKind::Instance { def_ref } => out.push(def_ref),
            BlockKind::Plain { children, .. } => collect_def_refs(children, out),
        }
    }
}

struct Expander<'a> {
    defs: &'a IndexMap<String, BlockDef>,
    nodes: Vec<ExpandedNode>,
    connectors: Vec<ExpandedConnector>,
    issues: Vec<ExpandIssue>,
    stack: Vec<&'a str>,
    // Def-scoped connector problems are reported once, not once per instance.
    reported_defs: HashSet<&'a str>,
}

impl<'a> Expander<'a> {
    fn new(defs: &'a IndexMap<String, BlockDef>) -> Self {
        Self {
            defs,
            nodes: Vec::new(),
            connectors: Vec::new(),
            issues: Vec::new(),
            stack: Vec::new(),
            reported_defs: HashSet::new(),
        }
    }

    fn run(mut self, name: &str, roots: &'a [BlockNode], connectors: &'a [Connector]) -> Expansion {
        let root_ids: Vec<NodeId> = roots
            .iter()
            .map(|b| self.add_node(b, None, BlockPath::single(&b.name)))
            .collect();
        self.connect(&root_ids, connectors, true);
        Expansion {
            net: ExpandedNet {
                name: name.to_owned(),
                nodes: self.nodes,
                roots: root_ids,
                connectors: self.connectors,
            },
            issues: self.issues,
        }
    }

    fn add_node(
        &mut self,
        block: &'a BlockNode,
        parent: Option<NodeId>,
        path: BlockPath,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(ExpandedNode {
            name: block.name.clone(),
            path: path.clone(),
            parent,
            children: Vec::new(),
            stereotype: block.stereotype,
            instance_of: None,
            span: block.span.clone(),
        });
        match &block.kind {
            BlockKind::Plain {
                children,
                connectors,
            } => {
                let kids = self.add_children(id, &path, children);
                self.connect(&kids, connectors, true);
            }
            BlockKind::Instance { def_ref } => {
                self.nodes[id.0].instance_of = Some(def_ref.clone());
                match self.defs.get(def_ref) {
                    None => self.issues.push(ExpandIssue::UnresolvedDef {
                        name: def_ref.clone(),
                        span: block.span.clone(),
                    }),
                    Some(_) if self.stack.contains(&def_ref.as_str()) => {
                        self.issues.push(ExpandIssue::RecursiveInstance {
                            def: def_ref.clone(),
                        })
                    }
                    Some(def) => {
                        self.stack.push(&def.name);
                        let kids = self.add_children(id, &path, &def.children);
                        let first = self.reported_defs.insert(&def.name);
                        self.connect(&kids, &def.connectors, first);
                        self.stack.pop();
                    }
                }
            }
        }
        id
    }

    fn add_children(
        &mut self,
        id: NodeId,
        path: &BlockPath,
        children: &'a [BlockNode],
    ) -> Vec<NodeId> {
        let kids: Vec<NodeId> = children
            .iter()
            .map(|c| self.add_node(c, Some(id), path.child(&c.name)))
            .collect();
        self.nodes[id.0].children = kids.clone();
        kids
    }

    fn connect(&mut self, scope: &[NodeId], connectors: &[Connector], report: bool) {
        for c in connectors {
            let source = resolve_in(&self.nodes, scope, &c.source);
            let target = resolve_in(&self.nodes, scope, &c.target);
            match (source, target) {
                (Ok(source), Ok(target)) => self.connectors.push(ExpandedConnector {
                    source,
                    target,
                    signal: c.signal.clone(),
                    stereotype: c.stereotype,
                    span: c.span.clone(),
                }),
                (s, t) => {
                    if !report {
                        continue;
                    }
                    for (res, endpoint) in [(s, Endpoint::Source), (t, Endpoint::Target)] {
                        if let Err(error) = res {
                            self.issues.push(ExpandIssue::UnresolvedEndpoint {
                                connector: c.clone(),
                                endpoint,
                                error,
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Walks `path` down from the nodes of `scope`, first match per segment.
fn resolve_in(
    nodes: &[ExpandedNode],
    scope: &[NodeId],
    path: &BlockPath,
) -> Result<NodeId, UnknownPath> {
    let mut candidates = scope;
    let mut found: Option<NodeId> = None;
    for (depth, seg) in path.segments().iter().enumerate() {
        match candidates
            .iter()
            .copied()
            .find(|id| nodes[id.0].name == *seg)
        {
            Some(id) => {
                found = Some(id);
                candidates = &nodes[id.0].children;
            }
            None => {
                return Err(UnknownPath {
                    path: path.clone(),
                    prefix: BlockPath::new(path.segments()[..depth].to_vec()),
                })
            }
        }
    }
    found.ok_or_else(|| UnknownPath {
        path: path.clone(),
        prefix: None,
    })
}

impl ExpandedNet {
    pub fn node(&self, id: NodeId) -> &ExpandedNode {
        &self.nodes[id.0]
    }

    /// All nodes in pre-order (parents before children, siblings in order).
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &ExpandedNode)> + '_ {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack: Vec<NodeId> = self.roots.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            order.push(id);
            stack.extend(self.nodes[id.0].children.iter().rev().copied());
        }
        order.into_iter().map(move |id| (id, &self.nodes[id.0]))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn connectors(&self) -> &[ExpandedConnector] {
        &self.connectors
    }

    /// Unique node at `path`; the error carries the longest resolvable prefix.
    pub fn resolve(&self, path: &BlockPath) -> Result<NodeId, UnknownPath> {
        resolve_in(&self.nodes, &self.roots, path)
    }

    pub fn path(&self, id: NodeId) -> &BlockPath {
        &self.nodes[id.0].path
    }

    /// Proper (irreflexive) containment over node ids.
    pub fn contains(&self, ancestor: NodeId, descendant: NodeId) -> bool {
        let mut cur = self.nodes[descendant.0].parent;
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.nodes[p.0].parent;
        }
        false
    }

    /// True iff `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: &BlockPath, b: &BlockPath) -> Result<bool, UnknownPath> {
        Ok(self.contains(self.resolve(a)?, self.resolve(b)?))
    }

    pub fn is_ancestor_or_self(&self, a: &BlockPath, b: &BlockPath) -> Result<bool, UnknownPath> {
        let (a, b) = (self.resolve(a)?, self.resolve(b)?);
        Ok(a == b || self.contains(a, b))
    }

    /// Signal names carried by any connector.
    pub fn signals(&self) -> BTreeSet<&str> {
        self.connectors
            .iter()
            .filter_map(|c| c.signal.as_deref())
            .collect()
    }

    /// `source -> target : signal` with absolute paths.
    pub fn describe_connector(&self, c: &ExpandedConnector) -> String {
        describe_edge(
            &self.path(c.source).to_string(),
            &self.path(c.target).to_string(),
            c.signal.as_deref(),
            c.stereotype,
        )
    }

    /// Rebuilds a def-free net with absolute, net-level connectors.
    pub fn as_function_net(&self) -> FunctionNet {
        fn build(net: &ExpandedNet, id: NodeId) -> BlockNode {
            let n = net.node(id);
            let children = n.children.iter().map(|&c| build(net, c)).collect();
            BlockNode {
                name: n.name.clone(),
                kind: BlockKind::Plain {
                    children,
                    connectors: Vec::new(),
                },
                stereotype: n.stereotype,
                span: n.span.clone(),
            }
        }
        let mut out = FunctionNet::new(&self.name);
        out.roots = self.roots.iter().map(|&r| build(self, r)).collect();
        out.connectors = self
            .connectors
            .iter()
            .map(|c| Connector {
                source: self.path(c.source).clone(),
                target: self.path(c.target).clone(),
                signal: c.signal.clone(),
                stereotype: c.stereotype,
                span: c.span.clone(),
            })
            .collect();
        out
    }

    /// Structural equality of the instantiated trees and connectors.
    pub fn structurally_eq(&self, other: &ExpandedNet) -> bool {
        let mut a = self.as_function_net();
        let mut b = other.as_function_net();
        a.strip_spans();
        b.strip_spans();
        a == b
    }
}
