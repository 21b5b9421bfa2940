//! Semantic model of function nets, their views and mode machines.
//!
//! A [`Model`] holds exactly one complete [`FunctionNet`] together with the
//! views drawn against it, the mode machines that bind views to operating
//! modes, and the variant/feature groupings over those views. Values are
//! plain data: every query over them is a pure function.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Serialize, Serializer};

use crate::span::SourceSpan;

/// Root-to-node name sequence in a block hierarchy, e.g. `left.LockCtrl`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPath(Vec<String>);

impl BlockPath {
    /// Returns `None` for an empty segment list.
    pub fn new(segments: Vec<String>) -> Option<Self> {
        if segments.is_empty() {
            None
        } else {
            Some(Self(segments))
        }
    }

    pub fn single(name: impl Into<String>) -> Self {
        Self(vec![name.into()])
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Final segment.
    pub fn name(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or_default()
    }

    pub fn child(&self, name: impl Into<String>) -> Self {
        let mut segments = self.0.clone();
        segments.push(name.into());
        Self(segments)
    }

    pub fn parent(&self) -> Option<Self> {
        Self::new(self.0[..self.0.len() - 1].to_vec())
    }

    /// Appends a relative path below this one.
    pub fn join(&self, relative: &BlockPath) -> Self {
        let mut segments = self.0.clone();
        segments.extend(relative.0.iter().cloned());
        Self(segments)
    }

    pub fn starts_with(&self, prefix: &BlockPath) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn is_proper_prefix_of(&self, other: &BlockPath) -> bool {
        self.0.len() < other.0.len() && other.starts_with(self)
    }
}

impl fmt::Display for BlockPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid block path `{0}`")]
pub struct InvalidPath(pub String);

impl FromStr for BlockPath {
    type Err = InvalidPath;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let segments: Vec<String> = s.split('.').map(str::to_owned).collect();
        if segments.iter().all(|seg| is_identifier(seg)) {
            Ok(Self(segments))
        } else {
            Err(InvalidPath(s.to_owned()))
        }
    }
}

impl Serialize for BlockPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// ASCII identifier `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Context marker on a view block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockStereotype {
    /// Imported from another feature; context only.
    Ext,
    /// Environmental, non-E/E element with a physical counterpart.
    Env,
}

impl BlockStereotype {
    pub fn keyword(self) -> &'static str {
        match self {
            Self::Ext => "ext",
            Self::Env => "env",
        }
    }
}

/// Non-signal communication marker on a view connector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interaction {
    Mechanical,
    Hydraulic,
    Electrical,
}

impl Interaction {
    pub fn letter(self) -> &'static str {
        match self {
            Self::Mechanical => "M",
            Self::Hydraulic => "H",
            Self::Electrical => "E",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "M" => Some(Self::Mechanical),
            "H" => Some(Self::Hydraulic),
            "E" => Some(Self::Electrical),
            _ => None,
        }
    }
}

/// Directed edge between two blocks of the same scope.
///
/// Endpoint paths are relative to the scope the connector is declared in:
/// the net or view body, a def body, or a plain block body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub source: BlockPath,
    pub target: BlockPath,
    pub signal: Option<String>,
    pub stereotype: Option<Interaction>,
    pub span: SourceSpan,
}

impl Connector {
    pub fn new(source: BlockPath, target: BlockPath, signal: Option<&str>) -> Self {
        Self {
            source,
            target,
            signal: signal.map(str::to_owned),
            stereotype: None,
            span: SourceSpan::default(),
        }
    }

    /// `source -> target : signal` rendering used in diagnostics.
    pub fn describe(&self) -> String {
        describe_edge(
            &self.source.to_string(),
            &self.target.to_string(),
            self.signal.as_deref(),
            self.stereotype,
        )
    }
}

pub(crate) fn describe_edge(
    source: &str,
    target: &str,
    signal: Option<&str>,
    stereotype: Option<Interaction>,
) -> String {
    let arrow = match stereotype {
        Some(s) => format!("-[{}]->", s.letter()),
        None => "->".to_owned(),
    };
    match signal {
        Some(sig) => format!("{source} {arrow} {target} : {sig}"),
        None => format!("{source} {arrow} {target}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    Plain {
        children: Vec<BlockNode>,
        connectors: Vec<Connector>,
    },
    /// Named instance of a [`BlockDef`]; its structure comes from the def.
    Instance { def_ref: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockNode {
    pub name: String,
    pub kind: BlockKind,
    pub stereotype: Option<BlockStereotype>,
    pub span: SourceSpan,
}

impl BlockNode {
    pub fn leaf(name: impl Into<String>) -> Self {
        Self::plain(name, Vec::new(), Vec::new())
    }

    pub fn plain(
        name: impl Into<String>,
        children: Vec<BlockNode>,
        connectors: Vec<Connector>,
    ) -> Self {
        Self {
            name: name.into(),
            kind: BlockKind::Plain {
                children,
                connectors,
            },
            stereotype: None,
            span: SourceSpan::default(),
        }
    }

    pub fn instance(name: impl Into<String>, def_ref: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: BlockKind::Instance {
                def_ref: def_ref.into(),
            },
            stereotype: None,
            span: SourceSpan::default(),
        }
    }

    pub fn with_stereotype(mut self, stereotype: BlockStereotype) -> Self {
        self.stereotype = Some(stereotype);
        self
    }

    pub fn children(&self) -> &[BlockNode] {
        match &self.kind {
            BlockKind::Plain { children, .. } => children,
            BlockKind::Instance { .. } => &[],
        }
    }

    pub fn connectors(&self) -> &[Connector] {
        match &self.kind {
            BlockKind::Plain { connectors, .. } => connectors,
            BlockKind::Instance { .. } => &[],
        }
    }
}

/// Reusable block structure, instantiated with `use name: Def`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDef {
    pub name: String,
    pub children: Vec<BlockNode>,
    pub connectors: Vec<Connector>,
    pub span: SourceSpan,
}

/// The complete function net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionNet {
    pub name: String,
    pub defs: IndexMap<String, BlockDef>,
    pub roots: Vec<BlockNode>,
    pub connectors: Vec<Connector>,
    pub span: SourceSpan,
}

impl FunctionNet {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            defs: IndexMap::new(),
            roots: Vec::new(),
            connectors: Vec::new(),
            span: SourceSpan::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ViewKind {
    Feature,
    Variant,
    Mode,
    #[default]
    Generic,
}

impl ViewKind {
    pub fn keyword(self) -> &'static str {
        match self {
            Self::Feature => "feature",
            Self::Variant => "variant",
            Self::Mode => "mode",
            Self::Generic => "generic",
        }
    }
}

impl fmt::Display for ViewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl Serialize for ViewKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.keyword())
    }
}

/// A view diagram over the complete net. May leave out blocks, signals and
/// hierarchy layers, and may add `ext`/`env` context blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDoc {
    pub name: String,
    pub target_net: String,
    pub kind: ViewKind,
    pub roots: Vec<BlockNode>,
    pub connectors: Vec<Connector>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeBinding {
    Complete,
    View(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mode {
    pub name: String,
    pub binding: ModeBinding,
    pub span: SourceSpan,
}

/// Boolean condition over signal faults and free-form events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trigger {
    Fault { signal: String, span: SourceSpan },
    Event { name: String, span: SourceSpan },
    Not(Box<Trigger>),
    And(Vec<Trigger>),
    Or(Vec<Trigger>),
}

impl Trigger {
    pub fn fault(signal: impl Into<String>) -> Self {
        Self::Fault {
            signal: signal.into(),
            span: SourceSpan::default(),
        }
    }

    pub fn event(name: impl Into<String>) -> Self {
        Self::Event {
            name: name.into(),
            span: SourceSpan::default(),
        }
    }

    /// Every `fault(..)` atom, left to right.
    pub fn faults(&self) -> Vec<(&str, &SourceSpan)> {
        let mut out = Vec::new();
        self.collect_faults(&mut out);
        out
    }

    fn collect_faults<'a>(&'a self, out: &mut Vec<(&'a str, &'a SourceSpan)>) {
        match self {
            Self::Fault { signal, span } => out.push((signal, span)),
            Self::Event { .. } => {}
            Self::Not(inner) => inner.collect_faults(out),
            Self::And(items) | Self::Or(items) => {
                items.iter().for_each(|t| t.collect_faults(out));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: String,
    pub target: String,
    pub trigger: Trigger,
    pub span: SourceSpan,
}

/// Statechart whose states are operating modes of the net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeMachine {
    pub name: String,
    pub target_net: String,
    pub modes: IndexMap<String, Mode>,
    pub initial: String,
    pub transitions: Vec<Transition>,
    pub span: SourceSpan,
}

/// One complete function net plus everything drawn against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub net: FunctionNet,
    pub views: IndexMap<String, ViewDoc>,
    pub machines: IndexMap<String, ModeMachine>,
    pub variant_groups: IndexMap<String, Vec<String>>,
    pub feature_views: Vec<String>,
}

impl Model {
    pub fn new(net: FunctionNet) -> Self {
        Self {
            net,
            views: IndexMap::new(),
            machines: IndexMap::new(),
            variant_groups: IndexMap::new(),
            feature_views: Vec::new(),
        }
    }

    /// Equality that ignores source locations.
    pub fn structurally_eq(&self, other: &Model) -> bool {
        self.clone().without_spans() == other.clone().without_spans()
    }

    pub fn without_spans(mut self) -> Self {
        self.net.strip_spans();
        self.views.values_mut().for_each(StripSpans::strip_spans);
        self.machines.values_mut().for_each(StripSpans::strip_spans);
        self
    }
}

/// Resets every [`SourceSpan`] to its default so values compare structurally.
pub trait StripSpans {
    fn strip_spans(&mut self);
}

impl StripSpans for Connector {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
    }
}

impl StripSpans for BlockNode {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        if let BlockKind::Plain {
            children,
            connectors,
        } = &mut self.kind
        {
            children.iter_mut().for_each(StripSpans::strip_spans);
            connectors.iter_mut().for_each(StripSpans::strip_spans);
        }
    }
}

impl StripSpans for BlockDef {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.children.iter_mut().for_each(StripSpans::strip_spans);
        self.connectors.iter_mut().for_each(StripSpans::strip_spans);
    }
}

impl StripSpans for FunctionNet {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.defs.values_mut().for_each(StripSpans::strip_spans);
        self.roots.iter_mut().for_each(StripSpans::strip_spans);
        self.connectors.iter_mut().for_each(StripSpans::strip_spans);
    }
}

impl StripSpans for ViewDoc {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.roots.iter_mut().for_each(StripSpans::strip_spans);
        self.connectors.iter_mut().for_each(StripSpans::strip_spans);
    }
}

impl StripSpans for Trigger {
    fn strip_spans(&mut self) {
        match self {
            Self::Fault { span, .. } | Self::Event { span, .. } => *span = SourceSpan::default(),
            Self::Not(inner) => inner.strip_spans(),
            Self::And(items) | Self::Or(items) => {
                items.iter_mut().for_each(StripSpans::strip_spans)
            }
        }
    }
}

impl StripSpans for ModeMachine {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        for mode in self.modes.values_mut() {
            mode.span = SourceSpan::default();
        }
        for t in &mut self.transitions {
            t.span = SourceSpan::default();
            t.trigger.strip_spans();
        }
    }
}
