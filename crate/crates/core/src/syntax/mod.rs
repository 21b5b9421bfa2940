//! The `.fnet` text format: parsing, cross-file merging and printing.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use indexmap::IndexMap;

pub use parser::parse_file;
pub use printer::{print_documents, print_model};

use crate::model::{FunctionNet, ModeMachine, Model, ViewDoc};
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, found {}",
            self.span, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// `variants Group for Net { variant View; .. }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantGroup {
    pub name: String,
    pub target_net: String,
    pub members: Vec<(String, SourceSpan)>,
    pub span: SourceSpan,
}

/// `features for Net { feature View; .. }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureList {
    pub target_net: String,
    pub members: Vec<(String, SourceSpan)>,
    pub span: SourceSpan,
}

/// One top-level document of a source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Net(FunctionNet),
    View(ViewDoc),
    Modes(ModeMachine),
    Variants(VariantGroup),
    Features(FeatureList),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MergeError {
    #[error("{second}: net `{second_name}` declared, but net `{first_name}` already declared at {first}")]
    MultipleNets {
        first_name: String,
        first: SourceSpan,
        second_name: String,
        second: SourceSpan,
    },
    #[error("no complete function net (`net`) declared")]
    MissingNet,
    #[error("{span}: {what} `{name}` declared more than once")]
    Duplicate {
        what: &'static str,
        name: String,
        span: SourceSpan,
    },
    #[error("{span}: {what} targets net `{target}`, but the complete net is `{net}`")]
    WrongTarget {
        what: String,
        target: String,
        net: String,
        span: SourceSpan,
    },
    #[error("{span}: `{referrer}` lists unknown view `{view}`")]
    UnknownView {
        referrer: String,
        view: String,
        span: SourceSpan,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("{} syntax error(s)", .0.len())]
    Parse(Vec<ParseError>),
    #[error("{} model error(s)", .0.len())]
    Merge(Vec<MergeError>),
}

impl LoadError {
    /// One line per underlying error.
    pub fn lines(&self) -> Vec<String> {
        match self {
            LoadError::Parse(errs) => errs.iter().map(ToString::to_string).collect(),
            LoadError::Merge(errs) => errs.iter().map(ToString::to_string).collect(),
        }
    }
}

/// Parses every `(path, text)` source and merges the documents into one model.
pub fn parse_model<P: AsRef<str>, T: AsRef<str>>(sources: &[(P, T)]) -> Result<Model, LoadError> {
    let mut documents = Vec::new();
    let mut errors = Vec::new();
    for (path, text) in sources {
        match parse_file(path.as_ref(), text.as_ref()) {
            Ok(docs) => documents.extend(docs),
            Err(errs) => errors.extend(errs),
        }
    }
    if sources.is_empty() {
        errors.push(ParseError {
            span: SourceSpan::new("<input>", 1, 1, 0),
            expected: "`net`, `view`, `modes`, `variants` or `features`".into(),
            found: "end of input".into(),
        });
    }
    if !errors.is_empty() {
        return Err(LoadError::Parse(errors));
    }
    merge(documents).map_err(LoadError::Merge)
}

/// Assembles documents (in order) into a model.
pub fn merge(documents: Vec<Document>) -> Result<Model, Vec<MergeError>> {
    let mut errors = Vec::new();
    let mut net: Option<FunctionNet> = None;
    let mut views: IndexMap<String, ViewDoc> = IndexMap::new();
    let mut machines: IndexMap<String, ModeMachine> = IndexMap::new();
    let mut groups: Vec<VariantGroup> = Vec::new();
    let mut features: Vec<FeatureList> = Vec::new();

    for doc in documents {
        match doc {
            Document::Net(n) => match &net {
                Some(first) => errors.push(MergeError::MultipleNets {
                    first_name: first.name.clone(),
                    first: first.span.clone(),
                    second_name: n.name.clone(),
                    second: n.span.clone(),
                }),
                None => net = Some(n),
            },
            Document::View(v) => {
                if views.contains_key(&v.name) {
                    errors.push(MergeError::Duplicate {
                        what: "view",
                        name: v.name.clone(),
                        span: v.span.clone(),
                    });
                } else {
                    views.insert(v.name.clone(), v);
                }
            }
            Document::Modes(m) => {
                if machines.contains_key(&m.name) {
                    errors.push(MergeError::Duplicate {
                        what: "mode machine",
                        name: m.name.clone(),
                        span: m.span.clone(),
                    });
                } else {
                    machines.insert(m.name.clone(), m);
                }
            }
            Document::Variants(g) => {
                if groups.iter().any(|other| other.name == g.name) {
                    errors.push(MergeError::Duplicate {
                        what: "variant group",
                        name: g.name.clone(),
                        span: g.span.clone(),
                    });
                } else {
                    groups.push(g);
                }
            }
            Document::Features(f) => features.push(f),
        }
    }

    let Some(net) = net else {
        errors.push(MergeError::MissingNet);
        return Err(errors);
    };

    let mut wrong_target = |what: String, target: &str, span: &SourceSpan| {
        if target != net.name {
            errors.push(MergeError::WrongTarget {
                what,
                target: target.to_owned(),
                net: net.name.clone(),
                span: span.clone(),
            });
        }
    };
    for v in views.values() {
        wrong_target(format!("view `{}`", v.name), &v.target_net, &v.span);
    }
    for m in machines.values() {
        wrong_target(format!("modes `{}`", m.name), &m.target_net, &m.span);
    }
    for g in &groups {
        wrong_target(format!("variants `{}`", g.name), &g.target_net, &g.span);
    }
    for f in &features {
        wrong_target("features".to_owned(), &f.target_net, &f.span);
    }

    let mut variant_groups = IndexMap::new();
    for g in groups {
        for (view, span) in &g.members {
            if !views.contains_key(view) {
                errors.push(MergeError::UnknownView {
                    referrer: g.name.clone(),
                    view: view.clone(),
                    span: span.clone(),
                });
            }
        }
        variant_groups.insert(g.name, g.members.into_iter().map(|(v, _)| v).collect());
    }
    let mut feature_views: Vec<String> = Vec::new();
    for f in features {
        for (view, span) in f.members {
            if !views.contains_key(&view) {
                errors.push(MergeError::UnknownView {
                    referrer: "features".into(),
                    view,
                    span,
                });
            } else if feature_views.contains(&view) {
                errors.push(MergeError::Duplicate {
                    what: "feature",
                    name: view,
                    span,
                });
            } else {
                feature_views.push(view);
            }
        }
    }

    if errors.is_empty() {
        Ok(Model {
            net,
            views,
            machines,
            variant_groups,
            feature_views,
        })
    } else {
        Err(errors)
    }
}
