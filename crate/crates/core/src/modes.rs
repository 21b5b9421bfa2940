//! Mode machines: statechart validation and per-mode content differences.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::consistency::{check_view_against, identify};
use crate::diagnostics::{CheckReport, Code, Diagnostic, Target};
use crate::expand::{expand_lenient, ExpandedNet};
use crate::model::{ModeBinding, ModeMachine, Model, ViewDoc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModeError {
    #[error("unknown mode machine `{0}`")]
    UnknownMachine(String),
    #[error("machine `{machine}` has no mode `{mode}`")]
    UnknownMode { machine: String, mode: String },
    #[error("mode `{mode}` binds unknown view `{view}`")]
    UnknownView { mode: String, view: String },
    #[error("mode `{mode}` binds inconsistent view `{view}`")]
    InconsistentView { mode: String, view: String },
}

/// Validates `machine` against the model it belongs to.
pub fn check_machine(machine: &ModeMachine, model: &Model) -> CheckReport {
    let expanded = expand_lenient(&model.net).net;
    let reports: HashMap<&str, CheckReport> = machine
        .modes
        .values()
        .filter_map(|m| match &m.binding {
            ModeBinding::View(v) => model.views.get(v),
            ModeBinding::Complete => None,
        })
        .map(|v| (v.name.as_str(), check_view_against(v, &expanded)))
        .collect();
    check_machine_with(machine, model, &expanded, &|name| reports.get(name))
}

pub(crate) fn check_machine_with<'r>(
    machine: &ModeMachine,
    model: &Model,
    net: &ExpandedNet,
    view_report: &dyn Fn(&str) -> Option<&'r CheckReport>,
) -> CheckReport {
    let mut out = Vec::new();

    for mode in machine.modes.values() {
        let ModeBinding::View(view) = &mode.binding else {
            continue;
        };
        if !model.views.contains_key(view) {
            out.push(Diagnostic::error(
                Code::M01,
                &mode.span,
                mode.name.clone(),
                format!("mode binds unknown view `{view}`"),
            ));
        } else if let Some(report) = view_report(view).filter(|r| !r.is_consistent()) {
            let codes: Vec<&str> = report.error_codes().iter().map(|c| c.as_str()).collect();
            out.push(Diagnostic::error(
                Code::M04,
                &mode.span,
                mode.name.clone(),
                format!(
                    "bound view `{view}` is inconsistent ({} error(s): {})",
                    report.errors().count(),
                    codes.join(", ")
                ),
            ));
        }
    }

    let signals = net.signals();
    for t in &machine.transitions {
        for (signal, span) in t.trigger.faults() {
            if !signals.contains(signal) {
                out.push(Diagnostic::error(
                    Code::M02,
                    span,
                    format!("{} -> {}", t.source, t.target),
                    format!("fault trigger names `{signal}`, which no connector of the complete net carries"),
                ));
            }
        }
    }

    let mut reached: HashSet<&str> = HashSet::new();
    let mut queue = VecDeque::from([machine.initial.as_str()]);
    while let Some(mode) = queue.pop_front() {
        if reached.insert(mode) {
            queue.extend(
                machine
                    .transitions
                    .iter()
                    .filter(|t| t.source == mode)
                    .map(|t| t.target.as_str()),
            );
        }
    }
    for mode in machine.modes.values() {
        if !reached.contains(mode.name.as_str()) {
            out.push(Diagnostic::error(
                Code::M03,
                &mode.span,
                mode.name.clone(),
                format!(
                    "mode is unreachable from initial mode `{}`",
                    machine.initial
                ),
            ));
        }
    }

    CheckReport::new(Target::machine(&machine.name), out)
}

/// Blocks and signals a mode's binding shows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Content {
    pub blocks: BTreeSet<String>,
    pub signals: BTreeSet<String>,
}

/// The net blocks covered by a view and the signals its connectors carry.
/// `ext`/`env` blocks and M/H/E interactions do not count.
pub fn view_content(view: &ViewDoc, net: &ExpandedNet) -> Content {
    let ident = identify(view, net);
    Content {
        blocks: ident
            .covered()
            .into_iter()
            .map(|n| net.path(n).to_string())
            .collect(),
        signals: ident
            .tree
            .connectors()
            .iter()
            .filter(|c| c.stereotype.is_none())
            .filter_map(|c| c.signal.clone())
            .collect(),
    }
}

pub fn net_content(net: &ExpandedNet) -> Content {
    Content {
        blocks: net.nodes().map(|(_, n)| n.path.to_string()).collect(),
        signals: net.signals().into_iter().map(str::to_owned).collect(),
    }
}

/// Set differences between the contents of two modes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub only_in_a: Content,
    pub only_in_b: Content,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.only_in_a == Content::default() && self.only_in_b == Content::default()
    }
}

fn mode_content(
    machine: &ModeMachine,
    mode: &str,
    model: &Model,
    net: &ExpandedNet,
) -> Result<Content, ModeError> {
    let m = machine
        .modes
        .get(mode)
        .ok_or_else(|| ModeError::UnknownMode {
            machine: machine.name.clone(),
            mode: mode.to_owned(),
        })?;
    match &m.binding {
        ModeBinding::Complete => Ok(net_content(net)),
        ModeBinding::View(v) => {
            let view = model.views.get(v).ok_or_else(|| ModeError::UnknownView {
                mode: mode.to_owned(),
                view: v.clone(),
            })?;
            if !check_view_against(view, net).is_consistent() {
                return Err(ModeError::InconsistentView {
                    mode: mode.to_owned(),
                    view: v.clone(),
                });
            }
            Ok(view_content(view, net))
        }
    }
}

/// What mode `a` shows that mode `b` does not, and vice versa.
pub fn mode_diff(
    machine: &ModeMachine,
    a: &str,
    b: &str,
    model: &Model,
) -> Result<DiffReport, ModeError> {
    let net = expand_lenient(&model.net).net;
    let ca = mode_content(machine, a, model, &net)?;
    let cb = mode_content(machine, b, model, &net)?;
    let minus = |x: &Content, y: &Content| Content {
        blocks: x.blocks.difference(&y.blocks).cloned().collect(),
        signals: x.signals.difference(&y.signals).cloned().collect(),
    };
    Ok(DiffReport {
        only_in_a: minus(&ca, &cb),
        only_in_b: minus(&cb, &ca),
    })
}
