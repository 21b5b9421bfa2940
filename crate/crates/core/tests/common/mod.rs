//! Random model generators and brute-force oracles shared by the
//! integration tests and the acceptance runner.
//!
//! The oracles work on plain path lists produced by the generators
//! themselves, never on the crate's expanded nets.

#![allow(dead_code)]

pub mod fixture;

use std::collections::{BTreeMap, BTreeSet};

use fnet::{
    BlockDef, BlockNode, BlockPath, BlockStereotype, Connector, FunctionNet, Interaction, Mode,
    ModeBinding, ModeMachine, Model, Transition, Trigger, ViewDoc, ViewKind,
};
use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(s: &str) -> BlockPath {
    s.parse().unwrap()
}

/// A generated net with its flattened form, computed independently of
/// `fnet::expand`.
#[derive(Debug, Clone)]
pub struct GenNet {
    pub net: FunctionNet,
    /// Root-to-node name sequences of every expanded node, parents first.
    pub paths: Vec<Vec<String>>,
    /// `(source, target, signal)` over indices into `paths`.
    pub conns: Vec<(usize, usize, String)>,
}

impl GenNet {
    pub fn index_of(&self, p: &[String]) -> Option<usize> {
        self.paths.iter().position(|q| q == p)
    }

    pub fn dotted(&self, i: usize) -> String {
        self.paths[i].join(".")
    }

    pub fn parent_of(&self, i: usize) -> Option<usize> {
        let p = &self.paths[i];
        (p.len() > 1).then(|| self.index_of(&p[..p.len() - 1]).unwrap())
    }

    pub fn signals(&self) -> BTreeSet<String> {
        self.conns.iter().map(|c| c.2.clone()).collect()
    }
}

struct GenBlock {
    name: String,
    parent: Option<usize>,
    def: Option<usize>,
}

/// A well-formed net with at most `max_blocks` declared blocks, at most
/// `max_conns` expanded connectors and at most `max_defs` defs.
pub fn random_net(
    rng: &mut TestRng,
    max_blocks: usize,
    max_conns: usize,
    max_defs: usize,
) -> GenNet {
    let mut net = FunctionNet::new("N");

    let ndefs = rng.gen_range(0..=max_defs);
    let mut def_children: Vec<Vec<String>> = Vec::new();
    let mut def_conn: Vec<Option<String>> = Vec::new();
    for k in 0..ndefs {
        let kids: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|j| format!("L{k}x{j}"))
            .collect();
        let conn = (kids.len() == 2 && rng.gen_bool(0.5)).then(|| format!("d{k}"));
        let mut def = BlockDef {
            name: format!("D{k}"),
            children: kids.iter().map(BlockNode::leaf).collect(),
            connectors: Vec::new(),
            span: Default::default(),
        };
        if let Some(sig) = &conn {
            def.connectors
                .push(Connector::new(path(&kids[0]), path(&kids[1]), Some(sig)));
        }
        net.defs.insert(def.name.clone(), def);
        def_children.push(kids);
        def_conn.push(conn);
    }

    let nblocks = rng.gen_range(1..=max_blocks);
    let mut blocks: Vec<GenBlock> = Vec::new();
    for i in 0..nblocks {
        let def = (ndefs > 0 && rng.gen_bool(0.3)).then(|| rng.gen_range(0..ndefs));
        let plain_parents: Vec<usize> = (0..i).filter(|&j| blocks[j].def.is_none()).collect();
        let parent = if !plain_parents.is_empty() && rng.gen_bool(0.6) {
            Some(*plain_parents.choose(rng).unwrap())
        } else {
            None
        };
        let name = match def {
            Some(_) => format!("I{i}"),
            None => format!("B{i}"),
        };
        blocks.push(GenBlock { name, parent, def });
    }

    fn build(blocks: &[GenBlock], defs: &[String], i: usize) -> BlockNode {
        let b = &blocks[i];
        match b.def {
            Some(d) => BlockNode::instance(&b.name, &defs[d]),
            None => {
                let kids = (0..blocks.len())
                    .filter(|&j| blocks[j].parent == Some(i))
                    .map(|j| build(blocks, defs, j))
                    .collect();
                BlockNode::plain(&b.name, kids, Vec::new())
            }
        }
    }
    let def_names: Vec<String> = (0..ndefs).map(|k| format!("D{k}")).collect();
    net.roots = (0..nblocks)
        .filter(|&i| blocks[i].parent.is_none())
        .map(|i| build(&blocks, &def_names, i))
        .collect();

    // Flatten in pre-order, independently of the crate.
    let mut paths: Vec<Vec<String>> = Vec::new();
    let mut conns = Vec::new();
    fn flatten(
        blocks: &[GenBlock],
        def_children: &[Vec<String>],
        def_conn: &[Option<String>],
        i: usize,
        prefix: &[String],
        paths: &mut Vec<Vec<String>>,
        conns: &mut Vec<(usize, usize, String)>,
    ) {
        let mut me = prefix.to_vec();
        me.push(blocks[i].name.clone());
        paths.push(me.clone());
        if let Some(d) = blocks[i].def {
            let first = paths.len();
            for kid in &def_children[d] {
                let mut p = me.clone();
                p.push(kid.clone());
                paths.push(p);
            }
            if let Some(sig) = &def_conn[d] {
                conns.push((first, first + 1, sig.clone()));
            }
        }
        for j in 0..blocks.len() {
            if blocks[j].parent == Some(i) {
                flatten(blocks, def_children, def_conn, j, &me, paths, conns);
            }
        }
    }
    for i in 0..nblocks {
        if blocks[i].parent.is_none() {
            flatten(
                &blocks,
                &def_children,
                &def_conn,
                i,
                &[],
                &mut paths,
                &mut conns,
            );
        }
    }

    if paths.len() >= 2 {
        let budget = max_conns.saturating_sub(conns.len());
        for _ in 0..rng.gen_range(0..=budget) {
            let s = rng.gen_range(0..paths.len());
            let mut t = rng.gen_range(0..paths.len());
            while t == s {
                t = rng.gen_range(0..paths.len());
            }
            let sig = format!("S{}", rng.gen_range(0..4));
            net.connectors.push(Connector::new(
                BlockPath::new(paths[s].clone()).unwrap(),
                BlockPath::new(paths[t].clone()).unwrap(),
                Some(&sig),
            ));
            conns.push((s, t, sig));
        }
    }
    GenNet { net, paths, conns }
}

/// One block of a view in flat form: view parent index, net identity.
#[derive(Debug, Clone)]
pub struct PNode {
    pub name: String,
    pub label: usize,
    pub parent: Option<usize>,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub struct PConn {
    pub src: usize,
    pub tgt: usize,
    pub signal: Option<String>,
}

/// A view obtained from a net by projection steps. Every alive node knows
/// which net node it stands for.
#[derive(Debug, Clone)]
pub struct Projection {
    pub nodes: Vec<PNode>,
    pub conns: Vec<PConn>,
}

impl Projection {
    pub fn full(g: &GenNet) -> Self {
        let nodes = (0..g.paths.len())
            .map(|i| PNode {
                name: g.paths[i].last().unwrap().clone(),
                label: i,
                parent: g.parent_of(i),
                alive: true,
            })
            .collect();
        let conns = g
            .conns
            .iter()
            .map(|(s, t, sig)| PConn {
                src: *s,
                tgt: *t,
                signal: Some(sig.clone()),
            })
            .collect();
        Projection { nodes, conns }
    }

    pub fn alive(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].alive)
            .collect()
    }

    pub fn view_path(&self, mut i: usize) -> Vec<String> {
        let mut out = vec![self.nodes[i].name.clone()];
        while let Some(p) = self.nodes[i].parent {
            out.push(self.nodes[p].name.clone());
            i = p;
        }
        out.reverse();
        out
    }

    fn is_descendant(&self, mut i: usize, anc: usize) -> bool {
        while let Some(p) = self.nodes[i].parent {
            if p == anc {
                return true;
            }
            i = p;
        }
        false
    }

    /// Every alive node identifies its own label and siblings are unique.
    fn valid(&self, g: &GenNet) -> bool {
        let alive = self.alive();
        if alive.is_empty() {
            return false;
        }
        let mut seen = BTreeSet::new();
        for &i in &alive {
            if !seen.insert((self.nodes[i].parent, self.nodes[i].name.clone())) {
                return false;
            }
            if oracle_identify(g, &self.view_path(i)) != Some(self.nodes[i].label) {
                return false;
            }
        }
        true
    }

    /// Applies one random projection step; steps that would break
    /// identification are rejected and leave the projection unchanged.
    pub fn step(&mut self, g: &GenNet, rng: &mut TestRng) -> bool {
        let before = self.clone();
        let alive = self.alive();
        match rng.gen_range(0..5) {
            0 => {
                // Delete a whole subtree, dropping or lifting its connectors.
                let x = *alive.choose(rng).unwrap();
                let doomed: Vec<usize> = alive
                    .iter()
                    .copied()
                    .filter(|&i| i == x || self.is_descendant(i, x))
                    .collect();
                for &d in &doomed {
                    self.nodes[d].alive = false;
                }
                let lift = self.nodes[x].parent;
                let mut kept = Vec::new();
                for mut c in std::mem::take(&mut self.conns) {
                    let touches = doomed.contains(&c.src) || doomed.contains(&c.tgt);
                    if !touches {
                        kept.push(c);
                        continue;
                    }
                    match lift {
                        Some(p) if rng.gen_bool(0.5) => {
                            if doomed.contains(&c.src) {
                                c.src = p;
                            }
                            if doomed.contains(&c.tgt) {
                                c.tgt = p;
                            }
                            kept.push(c);
                        }
                        _ => {}
                    }
                }
                self.conns = kept;
            }
            1 => {
                if !self.conns.is_empty() {
                    let k = rng.gen_range(0..self.conns.len());
                    self.conns.remove(k);
                }
            }
            2 => {
                if !self.conns.is_empty() {
                    let k = rng.gen_range(0..self.conns.len());
                    self.conns[k].signal = None;
                }
            }
            _ => {
                // Collapse a layer: children move up, connectors are lifted.
                let x = *alive.choose(rng).unwrap();
                let up = self.nodes[x].parent;
                self.nodes[x].alive = false;
                for n in self.nodes.iter_mut() {
                    if n.alive && n.parent == Some(x) {
                        n.parent = up;
                    }
                }
                let mut kept = Vec::new();
                for mut c in std::mem::take(&mut self.conns) {
                    if c.src != x && c.tgt != x {
                        kept.push(c);
                    } else if let Some(p) = up {
                        if c.src == x {
                            c.src = p;
                        }
                        if c.tgt == x {
                            c.tgt = p;
                        }
                        kept.push(c);
                    }
                }
                self.conns = kept;
            }
        }
        if self.valid(g) {
            true
        } else {
            *self = before;
            false
        }
    }

    pub fn to_view(&self, name: &str, kind: ViewKind) -> ViewDoc {
        fn build(p: &Projection, i: usize) -> BlockNode {
            let kids = p
                .alive()
                .into_iter()
                .filter(|&j| p.nodes[j].parent == Some(i))
                .map(|j| build(p, j))
                .collect();
            BlockNode::plain(&p.nodes[i].name, kids, Vec::new())
        }
        ViewDoc {
            name: name.to_owned(),
            target_net: "N".to_owned(),
            kind,
            roots: self
                .alive()
                .into_iter()
                .filter(|&i| self.nodes[i].parent.is_none())
                .map(|i| build(self, i))
                .collect(),
            connectors: self
                .conns
                .iter()
                .map(|c| {
                    Connector::new(
                        BlockPath::new(self.view_path(c.src)).unwrap(),
                        BlockPath::new(self.view_path(c.tgt)).unwrap(),
                        c.signal.as_deref(),
                    )
                })
                .collect(),
            span: Default::default(),
        }
    }

    /// Net paths this view covers.
    pub fn blocks(&self, g: &GenNet) -> BTreeSet<String> {
        self.alive()
            .into_iter()
            .map(|i| g.dotted(self.nodes[i].label))
            .collect()
    }

    pub fn signals(&self) -> BTreeSet<String> {
        self.conns.iter().filter_map(|c| c.signal.clone()).collect()
    }
}

/// A projection after up to `max_steps` random steps.
pub fn random_projection(g: &GenNet, rng: &mut TestRng, max_steps: usize) -> Projection {
    let mut p = Projection::full(g);
    for _ in 0..rng.gen_range(0..=max_steps) {
        p.step(g, rng);
    }
    p
}

fn is_subsequence(needle: &[String], hay: &[String]) -> bool {
    let mut j = 0;
    for h in hay {
        if j < needle.len() && needle[j] == *h {
            j += 1;
        }
    }
    j == needle.len()
}

/// The net node a view block with root-to-block names `vpath` stands for.
pub fn oracle_identify(g: &GenNet, vpath: &[String]) -> Option<usize> {
    let name = vpath.last().unwrap();
    let named: Vec<usize> = (0..g.paths.len())
        .filter(|&i| g.paths[i].last().unwrap() == name)
        .collect();
    if named.len() == 1 {
        return Some(named[0]);
    }
    let fitting: Vec<usize> = named
        .into_iter()
        .filter(|&i| is_subsequence(vpath, &g.paths[i]))
        .collect();
    (fitting.len() == 1).then(|| fitting[0])
}

fn proper_prefix(a: &[String], b: &[String]) -> bool {
    a.len() < b.len() && b[..a.len()] == *a
}

struct FlatBlock {
    vpath: Vec<String>,
    parent: Option<usize>,
    stereotype: Option<BlockStereotype>,
}

fn flatten_view(view: &ViewDoc) -> Vec<FlatBlock> {
    fn walk(b: &BlockNode, parent: Option<usize>, prefix: &[String], out: &mut Vec<FlatBlock>) {
        let mut vpath = prefix.to_vec();
        vpath.push(b.name.clone());
        let me = out.len();
        out.push(FlatBlock {
            vpath: vpath.clone(),
            parent,
            stereotype: b.stereotype,
        });
        for c in b.children() {
            walk(c, Some(me), &vpath, out);
        }
    }
    let mut out = Vec::new();
    for r in &view.roots {
        walk(r, None, &[], &mut out);
    }
    out
}

/// The C1 to C5 conditions `view` violates, evaluated straight from their
/// definitions. Views must use top-level connectors with absolute paths.
pub fn oracle_codes(g: &GenNet, view: &ViewDoc) -> BTreeSet<&'static str> {
    let blocks = flatten_view(view);
    let ident: Vec<Option<usize>> = blocks
        .iter()
        .map(|b| match b.stereotype {
            Some(BlockStereotype::Env) => None,
            _ => oracle_identify(g, &b.vpath),
        })
        .collect();
    let plain = |i: usize| blocks[i].stereotype.is_none();
    let mut codes = BTreeSet::new();

    if (0..blocks.len()).any(|i| plain(i) && ident[i].is_none()) {
        codes.insert("C1");
    }
    for i in 0..blocks.len() {
        if let Some(p) = blocks[i].parent {
            if plain(i) && plain(p) {
                if let (Some(np), Some(nc)) = (ident[p], ident[i]) {
                    if !proper_prefix(&g.paths[np], &g.paths[nc]) {
                        codes.insert("C2");
                    }
                }
            }
        }
    }
    let view_contains = |u: usize, v: usize| {
        let mut cur = blocks[v].parent;
        while let Some(p) = cur {
            if p == u {
                return true;
            }
            cur = blocks[p].parent;
        }
        false
    };
    for u in 0..blocks.len() {
        for v in 0..blocks.len() {
            if u == v || !plain(u) || !plain(v) {
                continue;
            }
            if let (Some(nu), Some(nv)) = (ident[u], ident[v]) {
                if proper_prefix(&g.paths[nu], &g.paths[nv]) && !view_contains(u, v) {
                    codes.insert("C3");
                }
            }
        }
    }

    let shown: BTreeSet<usize> = ident.iter().flatten().copied().collect();
    let find = |p: &BlockPath| blocks.iter().position(|b| b.vpath == p.segments());
    for c in &view.connectors {
        if c.stereotype.is_some() {
            continue;
        }
        let (Some(s), Some(t)) = (find(&c.source), find(&c.target)) else {
            continue;
        };
        if blocks[s].stereotype == Some(BlockStereotype::Env)
            || blocks[t].stereotype == Some(BlockStereotype::Env)
        {
            continue;
        }
        let (Some(ns), Some(nt)) = (ident[s], ident[t]) else {
            continue;
        };
        let exact = |x: usize, n: usize| {
            x == n || (proper_prefix(&g.paths[x], &g.paths[n]) && !shown.contains(&n))
        };
        let relaxed = |x: usize, n: usize| x == n || proper_prefix(&g.paths[x], &g.paths[n]);
        let sig_ok = |sig: &String| c.signal.as_ref().is_none_or(|v| v == sig);
        if g.conns
            .iter()
            .any(|(a, b, sig)| sig_ok(sig) && exact(ns, *a) && exact(nt, *b))
        {
            continue;
        }
        if g.conns
            .iter()
            .any(|(a, b, sig)| sig_ok(sig) && relaxed(ns, *a) && relaxed(nt, *b))
        {
            codes.insert("C5");
        } else {
            codes.insert("C4");
        }
    }
    codes
}

/// A view of at most `max_blocks` blocks. Most blocks mirror a net node
/// below a view block standing for one of its ancestors; the rest take any
/// net or foreign name at any position. Connectors likewise mostly follow a
/// net connector, attached to its endpoints or their ancestors.
pub fn random_view(g: &GenNet, rng: &mut TestRng, max_blocks: usize, name: &str) -> ViewDoc {
    let mut names: Vec<String> = g.paths.iter().map(|p| p.last().unwrap().clone()).collect();
    names.sort();
    names.dedup();
    names.push("X0".into());
    names.push("X1".into());

    struct VB {
        name: String,
        parent: Option<usize>,
        stereotype: Option<BlockStereotype>,
        intended: Option<usize>,
    }
    let is_anc = |a: usize, b: usize| proper_prefix(&g.paths[a], &g.paths[b]);
    let mut vbs: Vec<VB> = Vec::new();
    for _ in 0..rng.gen_range(1..=max_blocks) {
        let stereotype = match rng.gen_range(0..10) {
            0 => Some(BlockStereotype::Ext),
            1 => Some(BlockStereotype::Env),
            _ => None,
        };
        let plain_parents: Vec<usize> = (0..vbs.len())
            .filter(|&j| vbs[j].stereotype.is_none())
            .collect();
        let (parent, intended) = if rng.gen_bool(0.7) {
            let target = rng.gen_range(0..g.paths.len());
            let above: Vec<usize> = plain_parents
                .iter()
                .copied()
                .filter(|&j| vbs[j].intended.is_some_and(|n| is_anc(n, target)))
                .collect();
            (above.choose(rng).copied(), Some(target))
        } else if !plain_parents.is_empty() && rng.gen_bool(0.5) {
            (Some(*plain_parents.choose(rng).unwrap()), None)
        } else {
            (None, None)
        };
        let taken: BTreeSet<&str> = vbs
            .iter()
            .filter(|v| v.parent == parent)
            .map(|v| v.name.as_str())
            .collect();
        let name = match intended {
            Some(n) => g.paths[n].last().unwrap().clone(),
            None => {
                let free: Vec<&String> = names
                    .iter()
                    .filter(|n| !taken.contains(n.as_str()))
                    .collect();
                let Some(name) = free.choose(rng) else {
                    continue;
                };
                (*name).clone()
            }
        };
        if taken.contains(name.as_str()) {
            continue;
        }
        vbs.push(VB {
            name,
            parent,
            stereotype,
            intended,
        });
    }

    fn build(vbs: &[VB], i: usize) -> BlockNode {
        let kids = (0..vbs.len())
            .filter(|&j| vbs[j].parent == Some(i))
            .map(|j| build(vbs, j))
            .collect();
        let b = BlockNode::plain(&vbs[i].name, kids, Vec::new());
        match vbs[i].stereotype {
            Some(s) => b.with_stereotype(s),
            None => b,
        }
    }
    let vpath = |mut i: usize| {
        let mut out = vec![vbs[i].name.clone()];
        while let Some(p) = vbs[i].parent {
            out.push(vbs[p].name.clone());
            i = p;
        }
        out.reverse();
        BlockPath::new(out).unwrap()
    };

    let signals: Vec<String> = g.signals().into_iter().chain(["Sx".to_owned()]).collect();
    // View blocks standing for `n` or one of its ancestors.
    let covering = |n: usize| -> Vec<usize> {
        (0..vbs.len())
            .filter(|&j| vbs[j].intended.is_some_and(|m| m == n || is_anc(m, n)))
            .collect()
    };
    let mut connectors = Vec::new();
    for _ in 0..rng.gen_range(0..=5) {
        let (mut s, mut t) = (rng.gen_range(0..vbs.len()), rng.gen_range(0..vbs.len()));
        let mut signal = rng
            .gen_bool(0.6)
            .then(|| signals.choose(rng).unwrap().clone());
        if !g.conns.is_empty() && rng.gen_bool(0.75) {
            let (a, b, sig) = g.conns.choose(rng).unwrap();
            if let (Some(&vs), Some(&vt)) = (covering(*a).choose(rng), covering(*b).choose(rng)) {
                s = vs;
                t = vt;
                if rng.gen_bool(0.7) {
                    signal = rng.gen_bool(0.7).then(|| sig.clone());
                }
            }
        }
        let mut c = Connector::new(vpath(s), vpath(t), signal.as_deref());
        if rng.gen_bool(0.1) {
            c.stereotype = Some(
                *[
                    Interaction::Mechanical,
                    Interaction::Hydraulic,
                    Interaction::Electrical,
                ]
                .choose(rng)
                .unwrap(),
            );
        }
        connectors.push(c);
    }

    ViewDoc {
        name: name.to_owned(),
        target_net: "N".to_owned(),
        kind: ViewKind::Generic,
        roots: (0..vbs.len())
            .filter(|&i| vbs[i].parent.is_none())
            .map(|i| build(&vbs, i))
            .collect(),
        connectors,
        span: Default::default(),
    }
}

fn random_trigger(rng: &mut TestRng, depth: usize) -> Trigger {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return if rng.gen_bool(0.5) {
            Trigger::fault(format!("S{}", rng.gen_range(0..4)))
        } else {
            Trigger::event(format!("e{}", rng.gen_range(0..3)))
        };
    }
    match rng.gen_range(0..3) {
        0 => Trigger::Not(Box::new(random_trigger(rng, depth - 1))),
        k => {
            let items = (0..rng.gen_range(2..=3))
                .map(|_| random_trigger(rng, depth - 1))
                .collect();
            if k == 1 {
                Trigger::And(items)
            } else {
                Trigger::Or(items)
            }
        }
    }
}

/// A random model exercising every document kind, for round-trip tests.
pub fn random_model(rng: &mut TestRng) -> Model {
    let g = random_net(rng, 8, 8, 2);
    let mut model = Model::new(g.net.clone());

    // Some nets also carry block-scoped connectors.
    if let Some(b) = model.net.roots.iter_mut().find(|b| b.children().len() >= 2) {
        if let fnet::BlockKind::Plain {
            children,
            connectors,
        } = &mut b.kind
        {
            let (a, z) = (children[0].name.clone(), children[1].name.clone());
            connectors.push(Connector::new(path(&a), path(&z), Some("inner")));
        }
    }

    let kinds = [
        ViewKind::Generic,
        ViewKind::Feature,
        ViewKind::Variant,
        ViewKind::Mode,
    ];
    for k in 0..rng.gen_range(0..=3) {
        let mut v = random_view(&g, rng, 5, &format!("V{k}"));
        v.kind = *kinds.choose(rng).unwrap();
        model.views.insert(v.name.clone(), v);
    }
    let view_names: Vec<String> = model.views.keys().cloned().collect();

    for m in 0..rng.gen_range(0..=2) {
        let nmodes = rng.gen_range(1..=3);
        let mut modes = IndexMap::new();
        for i in 0..nmodes {
            let binding = if !view_names.is_empty() && rng.gen_bool(0.5) {
                ModeBinding::View(view_names.choose(rng).unwrap().clone())
            } else {
                ModeBinding::Complete
            };
            let name = format!("Mo{i}");
            modes.insert(
                name.clone(),
                Mode {
                    name,
                    binding,
                    span: Default::default(),
                },
            );
        }
        let transitions = (0..rng.gen_range(0..=3))
            .map(|_| Transition {
                source: format!("Mo{}", rng.gen_range(0..nmodes)),
                target: format!("Mo{}", rng.gen_range(0..nmodes)),
                trigger: random_trigger(rng, 3),
                span: Default::default(),
            })
            .collect();
        let machine = ModeMachine {
            name: format!("M{m}"),
            target_net: "N".into(),
            modes,
            initial: format!("Mo{}", rng.gen_range(0..nmodes)),
            transitions,
            span: Default::default(),
        };
        model.machines.insert(machine.name.clone(), machine);
    }

    if !view_names.is_empty() {
        for gi in 0..rng.gen_range(0..=2) {
            let mut members = view_names.clone();
            members.shuffle(rng);
            members.truncate(rng.gen_range(0..=view_names.len()));
            model.variant_groups.insert(format!("G{gi}"), members);
        }
        if rng.gen_bool(0.5) {
            let mut members = view_names.clone();
            members.shuffle(rng);
            members.truncate(rng.gen_range(1..=view_names.len()));
            model.feature_views = members;
        }
    }
    model
}

/// Elements held by every set, and the others mapped to their holders.
pub fn oracle_partition(
    sets: &BTreeMap<String, BTreeSet<String>>,
) -> (BTreeSet<String>, BTreeMap<String, BTreeSet<String>>) {
    let all: BTreeSet<String> = sets.values().flatten().cloned().collect();
    let mut common = BTreeSet::new();
    let mut specific = BTreeMap::new();
    for e in all {
        let holders: BTreeSet<String> = sets
            .iter()
            .filter(|(_, s)| s.contains(&e))
            .map(|(k, _)| k.clone())
            .collect();
        if holders.len() == sets.len() {
            common.insert(e);
        } else {
            specific.insert(e, holders);
        }
    }
    (common, specific)
}

/// Checks `(net, view)` codes via the crate, keeping only C1 to C5 errors.
pub fn crate_codes(net: &FunctionNet, view: &ViewDoc) -> BTreeSet<&'static str> {
    fnet::check_view(view, net)
        .errors()
        .map(|d| d.code.as_str())
        .filter(|c| c.starts_with('C'))
        .collect()
}
