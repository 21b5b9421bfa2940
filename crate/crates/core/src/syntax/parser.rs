//! Recursive-descent parser for `.fnet` documents.
//!
//! Errors are collected rather than returned early: on a bad statement the
//! parser skips to the next `;` or closing `}` of the current body and keeps
//! going, so one run reports every independent syntax error in a file.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::lexer::{is_keyword, tokenize, Token, TokenKind};
use super::{Document, FeatureList, ParseError, VariantGroup};
use crate::model::{
    BlockDef, BlockKind, BlockNode, BlockPath, BlockStereotype, Connector, FunctionNet,
    Interaction, Mode, ModeBinding, ModeMachine, Transition, Trigger, ViewDoc, ViewKind,
};
use crate::span::SourceSpan;

const DOCUMENT_START: &str = "`net`, `view`, `modes`, `variants` or `features`";

/// Parses one source file into its documents.
pub fn parse_file(file: &str, text: &str) -> Result<Vec<Document>, Vec<ParseError>> {
    let (tokens, mut errors) = tokenize(file, text);
    let mut parser = Parser {
        tokens,
        pos: 0,
        errors: Vec::new(),
    };
    let documents = parser.documents();
    errors.append(&mut parser.errors);
    if errors.is_empty() {
        Ok(documents)
    } else {
        errors.sort_by_key(|e| (e.span.line, e.span.column));
        Err(errors)
    }
}

/// Which statements a `{ .. }` body admits.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    NetTop,
    Net,
    View,
}

struct Body {
    blocks: Vec<BlockNode>,
    connectors: Vec<Connector>,
    defs: Vec<BlockDef>,
}

/// Marker for a statement that failed and has been reported.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    errors: Vec<ParseError>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Token {
        let i = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.peek().is_keyword(kw)
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error_at(&mut self, tok: &Token, expected: impl Into<String>) -> Reported {
        self.errors.push(ParseError {
            span: tok.span.clone(),
            expected: expected.into(),
            found: tok.describe(),
        });
        Reported
    }

    fn error_here(&mut self, expected: impl Into<String>) -> Reported {
        let tok = self.peek().clone();
        self.error_at(&tok, expected)
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        if self.at(kind) {
            Ok(self.bump())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.at_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!("`{kw}`")))
        }
    }

    /// A non-keyword identifier.
    fn ident(&mut self, what: &str) -> PResult<Token> {
        let tok = self.peek();
        if tok.kind == TokenKind::Ident && !is_keyword(&tok.text) {
            Ok(self.bump())
        } else {
            Err(self.error_here(what))
        }
    }

    /// Skips the rest of a broken statement: up to and including `;`, or up
    /// to (not including) the `}` closing the current body.
    fn recover_statement(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace if depth == 0 => return,
                TokenKind::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        if self.at(TokenKind::Semi) {
                            self.bump();
                        }
                        return;
                    }
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn at_document_start(&self) -> bool {
        ["net", "view", "modes", "variants", "features"]
            .iter()
            .any(|kw| self.at_keyword(kw))
    }

    fn documents(&mut self) -> Vec<Document> {
        let mut docs = Vec::new();
        let mut reported_garbage = false;
        while !self.at(TokenKind::Eof) {
            if !self.at_document_start() {
                if !reported_garbage {
                    self.error_here(DOCUMENT_START);
                    reported_garbage = true;
                }
                self.bump();
                continue;
            }
            reported_garbage = false;
            let start = self.pos;
            let doc = match self.peek().text.as_str() {
                "net" => self.net(),
                "view" => self.view(),
                "modes" => self.modes(),
                "variants" => self.variants(),
                _ => self.features(),
            };
            match doc {
                Ok(doc) => docs.push(doc),
                Err(Reported) => {
                    // Resynchronise on the next document keyword.
                    if self.pos == start {
                        self.bump();
                    }
                    while !self.at(TokenKind::Eof) && !self.at_document_start() {
                        self.bump();
                    }
                }
            }
        }
        if docs.is_empty() && self.errors.is_empty() {
            self.error_here(DOCUMENT_START);
        }
        docs
    }

    /// `{ stmt* }`, consuming both braces.
    fn body(&mut self, scope: Scope) -> PResult<Body> {
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut body = Body {
            blocks: Vec::new(),
            connectors: Vec::new(),
            defs: Vec::new(),
        };
        loop {
            if self.at(TokenKind::RBrace) {
                self.bump();
                return Ok(body);
            }
            if self.at(TokenKind::Eof)
                || (self.at_document_start() && self.peek_at(1).kind == TokenKind::Ident)
            {
                return Err(self.error_here("`}`"));
            }
            if self.statement(scope, &mut body).is_err() {
                self.recover_statement();
            }
        }
    }

    fn statement(&mut self, scope: Scope, body: &mut Body) -> PResult<()> {
        let tok = self.peek().clone();
        match tok.text.as_str() {
            _ if tok.kind != TokenKind::Ident => Err(self.error_here(statement_expectation(scope))),
            "def" if scope == Scope::NetTop => {
                body.defs.push(self.def()?);
                Ok(())
            }
            "ext" | "env" => {
                let stereotype = if self.bump().text == "ext" {
                    BlockStereotype::Ext
                } else {
                    BlockStereotype::Env
                };
                if !self.at_keyword("block") {
                    return Err(self.error_here("`block`"));
                }
                let mut block = self.block(scope, true)?;
                block.stereotype = Some(stereotype);
                body.blocks.push(block);
                Ok(())
            }
            "block" => {
                body.blocks.push(self.block(scope, false)?);
                Ok(())
            }
            "use" if scope != Scope::View => {
                body.blocks.push(self.instance()?);
                Ok(())
            }
            kw if is_keyword(kw) => Err(self.error_here(statement_expectation(scope))),
            _ => {
                body.connectors.push(self.connector()?);
                Ok(())
            }
        }
    }

    fn block(&mut self, scope: Scope, leaf_only: bool) -> PResult<BlockNode> {
        self.expect_keyword("block")?;
        let name = self.ident("a block name")?;
        let inner = if scope == Scope::View {
            Scope::View
        } else {
            Scope::Net
        };
        let (children, connectors) = if self.at(TokenKind::LBrace) {
            if leaf_only {
                return Err(self.error_here("`;` (`ext` and `env` blocks have no internals)"));
            }
            let body = self.body(inner)?;
            if self.at(TokenKind::Semi) {
                self.bump();
            }
            (body.blocks, body.connectors)
        } else {
            self.expect(TokenKind::Semi, "`;` or `{`")?;
            (Vec::new(), Vec::new())
        };
        Ok(BlockNode {
            name: name.text,
            kind: BlockKind::Plain {
                children,
                connectors,
            },
            stereotype: None,
            span: name.span,
        })
    }

    fn instance(&mut self) -> PResult<BlockNode> {
        self.expect_keyword("use")?;
        let name = self.ident("an instance name")?;
        self.expect(TokenKind::Colon, "`:`")?;
        let def = self.ident("a def name")?;
        self.expect(
            TokenKind::Semi,
            "`;` (instances take their structure from the def)",
        )?;
        Ok(BlockNode {
            name: name.text,
            kind: BlockKind::Instance { def_ref: def.text },
            stereotype: None,
            span: name.span,
        })
    }

    fn def(&mut self) -> PResult<BlockDef> {
        self.expect_keyword("def")?;
        let name = self.ident("a def name")?;
        let body = self.body(Scope::Net)?;
        if self.at(TokenKind::Semi) {
            self.bump();
        }
        Ok(BlockDef {
            name: name.text,
            children: body.blocks,
            connectors: body.connectors,
            span: name.span,
        })
    }

    fn path(&mut self) -> PResult<(BlockPath, SourceSpan)> {
        let first = self.ident("a block path")?;
        let span = first.span.clone();
        let mut segments = vec![first.text];
        while self.at(TokenKind::Dot) {
            self.bump();
            segments.push(self.ident("a block name after `.`")?.text);
        }
        let path = BlockPath::new(segments).expect("at least one segment");
        Ok((path, span))
    }

    fn connector(&mut self) -> PResult<Connector> {
        let (source, span) = self.path()?;
        let stereotype = if self.at(TokenKind::StereoOpen) {
            self.bump();
            let tok = self.peek().clone();
            let kind = match Interaction::from_letter(&tok.text) {
                Some(kind) if tok.kind == TokenKind::Ident => kind,
                _ => return Err(self.error_here("`M`, `H` or `E`")),
            };
            self.bump();
            self.expect(TokenKind::RBracket, "`]`")?;
            self.expect(TokenKind::Arrow, "`->`")?;
            Some(kind)
        } else {
            self.expect(TokenKind::Arrow, "`->` or `-[`")?;
            None
        };
        let (target, _) = self.path()?;
        let signal = if self.at(TokenKind::Colon) {
            self.bump();
            Some(self.ident("a signal name")?.text)
        } else {
            None
        };
        self.expect(TokenKind::Semi, "`;`")?;
        Ok(Connector {
            source,
            target,
            signal,
            stereotype,
            span,
        })
    }

    fn net(&mut self) -> PResult<Document> {
        self.expect_keyword("net")?;
        let name = self.ident("a net name")?;
        let body = self.body(Scope::NetTop)?;
        let mut defs: IndexMap<String, BlockDef> = IndexMap::new();
        for def in body.defs {
            if defs.contains_key(&def.name) {
                self.errors.push(ParseError {
                    span: def.span.clone(),
                    expected: "a def name not declared before".into(),
                    found: format!("`{}`", def.name),
                });
            } else {
                defs.insert(def.name.clone(), def);
            }
        }
        let net = FunctionNet {
            name: name.text,
            defs,
            roots: body.blocks,
            connectors: body.connectors,
            span: name.span,
        };
        self.check_def_refs(&net);
        Ok(Document::Net(net))
    }

    fn check_def_refs(&mut self, net: &FunctionNet) {
        fn walk(blocks: &[BlockNode], net: &FunctionNet, errors: &mut Vec<ParseError>) {
            for b in blocks {
                match &b.kind {
                    BlockKind::Instance { def_ref } if !net.defs.contains_key(def_ref) => errors
                        .push(ParseError {
                            span: b.span.clone(),
                            expected: format!("a def declared in net `{}`", net.name),
                            found: format!("`{def_ref}`"),
                        }),
                    BlockKind::Instance { .. } => {}
                    BlockKind::Plain { children, .. } => walk(children, net, errors),
                }
            }
        }
        walk(&net.roots, net, &mut self.errors);
        for def in net.defs.values() {
            walk(&def.children, net, &mut self.errors);
        }
    }

    fn view(&mut self) -> PResult<Document> {
        self.expect_keyword("view")?;
        let name = self.ident("a view name")?;
        let kind = match self.peek().text.as_str() {
            "feature" => Some(ViewKind::Feature),
            "variant" => Some(ViewKind::Variant),
            "mode" => Some(ViewKind::Mode),
            "generic" => Some(ViewKind::Generic),
            _ => None,
        };
        if kind.is_some() {
            self.bump();
        }
        if !self.at_keyword("for") {
            let expected = if kind.is_some() {
                "`for`"
            } else {
                "a view kind (`feature`, `variant`, `mode`, `generic`) or `for`"
            };
            return Err(self.error_here(expected));
        }
        self.bump();
        let target = self.ident("a net name")?;
        let body = self.body(Scope::View)?;
        Ok(Document::View(ViewDoc {
            name: name.text,
            target_net: target.text,
            kind: kind.unwrap_or_default(),
            roots: body.blocks,
            connectors: body.connectors,
            span: name.span,
        }))
    }

    fn modes(&mut self) -> PResult<Document> {
        self.expect_keyword("modes")?;
        let name = self.ident("a machine name")?;
        self.expect_keyword("for")?;
        let target = self.ident("a net name")?;
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut modes: IndexMap<String, Mode> = IndexMap::new();
        let mut initial: Option<String> = None;
        let mut transitions = Vec::new();
        let mut first = true;
        loop {
            if self.at(TokenKind::RBrace) {
                self.bump();
                break;
            }
            if self.at(TokenKind::Eof)
                || (self.at_document_start() && self.peek_at(1).kind == TokenKind::Ident)
            {
                return Err(self.error_here("`}`"));
            }
            let res = if first && !self.at_keyword("initial") {
                Err(self.error_here("`initial`"))
            } else if self.at_keyword("initial") || self.at_keyword("mode") {
                let is_initial = self.at_keyword("initial");
                if is_initial && !first {
                    Err(self.error_here("`mode` or a transition (only one initial mode)"))
                } else {
                    self.mode(is_initial).map(|mode| {
                        if modes.contains_key(&mode.name) {
                            self.errors.push(ParseError {
                                span: mode.span.clone(),
                                expected: "a mode name not declared before".into(),
                                found: format!("`{}`", mode.name),
                            });
                        } else {
                            if is_initial {
                                initial = Some(mode.name.clone());
                            }
                            modes.insert(mode.name.clone(), mode);
                        }
                    })
                }
            } else {
                self.transition().map(|t| transitions.push(t))
            };
            first = false;
            if res.is_err() {
                self.recover_statement();
            }
        }
        let Some(initial) = initial else {
            // The missing `initial` has already been reported.
            return Err(Reported);
        };
        for t in &transitions {
            for (mode, span) in [(&t.source, &t.span), (&t.target, &t.span)] {
                if !modes.contains_key(mode) {
                    self.errors.push(ParseError {
                        span: span.clone(),
                        expected: format!("a mode of `{}`", name.text),
                        found: format!("`{mode}`"),
                    });
                }
            }
        }
        Ok(Document::Modes(ModeMachine {
            name: name.text,
            target_net: target.text,
            modes,
            initial,
            transitions,
            span: name.span,
        }))
    }

    fn mode(&mut self, initial: bool) -> PResult<Mode> {
        if initial {
            self.expect_keyword("initial")?;
        }
        self.expect_keyword("mode")?;
        let name = self.ident("a mode name")?;
        self.expect_keyword("uses")?;
        let binding = if self.at_keyword("complete") {
            self.bump();
            ModeBinding::Complete
        } else if self.at_keyword("view") {
            self.bump();
            ModeBinding::View(self.ident("a view name")?.text)
        } else {
            return Err(self.error_here("`complete` or `view`"));
        };
        self.expect(TokenKind::Semi, "`;`")?;
        Ok(Mode {
            name: name.text,
            binding,
            span: name.span,
        })
    }

    fn transition(&mut self) -> PResult<Transition> {
        let source = self.ident("`mode` or a transition")?;
        self.expect(TokenKind::Arrow, "`->`")?;
        let target = self.ident("a mode name")?;
        self.expect_keyword("when")?;
        let trigger = self.disjunction()?;
        self.expect(TokenKind::Semi, "`;`, `and` or `or`")?;
        Ok(Transition {
            source: source.text,
            target: target.text,
            trigger,
            span: source.span,
        })
    }

    fn disjunction(&mut self) -> PResult<Trigger> {
        let mut items = vec![self.conjunction()?];
        while self.at_keyword("or") {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Trigger::Or(items)
        })
    }

    fn conjunction(&mut self) -> PResult<Trigger> {
        let mut items = vec![self.unary()?];
        while self.at_keyword("and") {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Trigger::And(items)
        })
    }

    fn unary(&mut self) -> PResult<Trigger> {
        if self.at_keyword("not") {
            self.bump();
            return Ok(Trigger::Not(Box::new(self.unary()?)));
        }
        if self.at_keyword("fault") {
            self.bump();
            self.expect(TokenKind::LParen, "`(`")?;
            let signal = self.ident("a signal name")?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(Trigger::Fault {
                signal: signal.text,
                span: signal.span,
            });
        }
        if self.at(TokenKind::LParen) {
            self.bump();
            let inner = self.disjunction()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(inner);
        }
        let event = self.ident("`fault(..)`, `not`, `(` or an event name")?;
        Ok(Trigger::Event {
            name: event.text,
            span: event.span,
        })
    }

    fn member_list(&mut self, item_kw: &str) -> PResult<Vec<(String, SourceSpan)>> {
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut members = Vec::new();
        let mut seen = HashSet::new();
        loop {
            if self.at(TokenKind::RBrace) {
                self.bump();
                return Ok(members);
            }
            if self.at(TokenKind::Eof)
                || (self.at_document_start() && self.peek_at(1).kind == TokenKind::Ident)
            {
                return Err(self.error_here("`}`"));
            }
            let res = (|| {
                self.expect_keyword(item_kw)?;
                let name = self.ident("a view name")?;
                self.expect(TokenKind::Semi, "`;`")?;
                Ok(name)
            })();
            match res {
                Ok(name) if !seen.insert(name.text.clone()) => {
                    self.errors.push(ParseError {
                        span: name.span,
                        expected: "a view not already listed".into(),
                        found: format!("`{}`", name.text),
                    });
                }
                Ok(name) => members.push((name.text, name.span)),
                Err(Reported) => self.recover_statement(),
            }
        }
    }

    fn variants(&mut self) -> PResult<Document> {
        self.expect_keyword("variants")?;
        let name = self.ident("a variant group name")?;
        self.expect_keyword("for")?;
        let target = self.ident("a net name")?;
        let members = self.member_list("variant")?;
        Ok(Document::Variants(VariantGroup {
            name: name.text,
            target_net: target.text,
            members,
            span: name.span,
        }))
    }

    fn features(&mut self) -> PResult<Document> {
        let kw = self.expect_keyword("features")?;
        self.expect_keyword("for")?;
        let target = self.ident("a net name")?;
        let members = self.member_list("feature")?;
        Ok(Document::Features(FeatureList {
            target_net: target.text,
            members,
            span: kw.span,
        }))
    }
}

fn statement_expectation(scope: Scope) -> &'static str {
    match scope {
        Scope::NetTop => "`def`, `block`, `use`, `ext`, `env`, a connector or `}`",
        Scope::Net => "`block`, `use`, `ext`, `env`, a connector or `}`",
        Scope::View => "`block`, `ext`, `env`, a connector or `}`",
    }
}
