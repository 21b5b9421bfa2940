//! Variant coverage and traceability queries over a checked model.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::consistency::{check_view_against, identify};
use crate::expand::{expand_lenient, expand_view, ExpandedNet, NodeId};
use crate::model::{BlockPath, ModeBinding, Model, ViewKind};
use crate::modes::{view_content, Content};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown variant group `{0}`")]
    UnknownGroup(String),
    #[error("variant view `{0}` is inconsistent with the complete net")]
    InconsistentVariantView(String),
    #[error("`{0}` is neither a block of the complete net nor a signal on one of its connectors")]
    UnknownSubject(String),
}

/// Which net blocks and signals each variant of a group retains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariantReport {
    pub group: String,
    pub per_variant: BTreeMap<String, Content>,
    /// Blocks retained by every variant.
    pub common: BTreeSet<String>,
    /// Blocks retained by some but not all variants, with those variants.
    pub variant_specific: BTreeMap<String, BTreeSet<String>>,
    /// Net blocks no variant retains.
    pub uncovered: BTreeSet<String>,
    pub common_signals: BTreeSet<String>,
    pub variant_specific_signals: BTreeMap<String, BTreeSet<String>>,
}

/// Splits `per_variant` sets into the elements every variant has and those
/// only some have.
fn partition<'a>(
    sets: impl Iterator<Item = (&'a String, &'a BTreeSet<String>)> + Clone,
) -> (BTreeSet<String>, BTreeMap<String, BTreeSet<String>>) {
    let total = sets.clone().count();
    let mut holders: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (variant, items) in sets {
        for item in items {
            holders
                .entry(item.clone())
                .or_default()
                .insert(variant.clone());
        }
    }
    let (common, specific): (BTreeMap<_, _>, BTreeMap<_, _>) =
        holders.into_iter().partition(|(_, vs)| vs.len() == total);
    (common.into_keys().collect(), specific)
}

pub fn variant_report(group: &str, model: &Model) -> Result<VariantReport, AnalysisError> {
    let members = model
        .variant_groups
        .get(group)
        .ok_or_else(|| AnalysisError::UnknownGroup(group.to_owned()))?;
    let net = expand_lenient(&model.net).net;

    let mut per_variant = BTreeMap::new();
    for name in members {
        let view = model
            .views
            .get(name)
            .ok_or_else(|| AnalysisError::InconsistentVariantView(name.clone()))?;
        if !check_view_against(view, &net).is_consistent() {
            return Err(AnalysisError::InconsistentVariantView(name.clone()));
        }
        per_variant.insert(name.clone(), view_content(view, &net));
    }

    let (common, variant_specific) = partition(per_variant.iter().map(|(v, c)| (v, &c.blocks)));
    let (common_signals, variant_specific_signals) =
        partition(per_variant.iter().map(|(v, c)| (v, &c.signals)));
    let uncovered = net
        .nodes()
        .map(|(_, n)| n.path.to_string())
        .filter(|p| per_variant.values().all(|c| !c.blocks.contains(p)))
        .collect();

    Ok(VariantReport {
        group: group.to_owned(),
        per_variant,
        common,
        variant_specific,
        uncovered,
        common_signals,
        variant_specific_signals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubjectKind {
    Block,
    Signal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViewRef {
    pub view: String,
    pub kind: ViewKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineLink {
    /// A mode binds a view that references the subject.
    Binding,
    /// A fault trigger names the signal.
    Trigger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MachineRef {
    pub machine: String,
    pub via: MachineLink,
}

/// Everything in the model that refers to one block or signal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub subject: String,
    pub kind: SubjectKind,
    pub referencing_views: Vec<ViewRef>,
    pub referencing_machines: Vec<MachineRef>,
    /// Net connectors touching the block or carrying the signal.
    pub net_connectors: Vec<String>,
}

/// A path resolves from the roots; a bare name may also name a unique block
/// anywhere in the net.
fn resolve_block(subject: &str, net: &ExpandedNet) -> Option<NodeId> {
    let path: BlockPath = subject.parse().ok()?;
    if let Ok(id) = net.resolve(&path) {
        return Some(id);
    }
    if path.segments().len() != 1 {
        return None;
    }
    let mut named = net
        .nodes()
        .filter(|(_, n)| n.name == subject)
        .map(|(id, _)| id);
    match (named.next(), named.next()) {
        (Some(id), None) => Some(id),
        _ => None,
    }
}

pub fn trace(subject: &str, model: &Model) -> Result<TraceReport, AnalysisError> {
    let net = expand_lenient(&model.net).net;
    let block = resolve_block(subject, &net);
    let kind = match block {
        Some(_) => SubjectKind::Block,
        None if net.signals().contains(subject) => SubjectKind::Signal,
        None => return Err(AnalysisError::UnknownSubject(subject.to_owned())),
    };

    let mut referencing_views = Vec::new();
    for view in model.views.values() {
        let refers = match block {
            Some(id) => identify(view, &net).shown().contains(&id),
            None => expand_view(view)
                .net
                .connectors()
                .iter()
                .any(|c| c.stereotype.is_none() && c.signal.as_deref() == Some(subject)),
        };
        if refers {
            referencing_views.push(ViewRef {
                view: view.name.clone(),
                kind: view.kind,
            });
        }
    }

    let mut referencing_machines = Vec::new();
    for machine in model.machines.values() {
        let bound = machine.modes.values().any(|m| match &m.binding {
            ModeBinding::View(v) => referencing_views.iter().any(|r| &r.view == v),
            ModeBinding::Complete => false,
        });
        if bound {
            referencing_machines.push(MachineRef {
                machine: machine.name.clone(),
                via: MachineLink::Binding,
            });
        }
        let triggered = block.is_none()
            && machine
                .transitions
                .iter()
                .any(|t| t.trigger.faults().iter().any(|(s, _)| *s == subject));
        if triggered {
            referencing_machines.push(MachineRef {
                machine: machine.name.clone(),
                via: MachineLink::Trigger,
            });
        }
    }

    let net_connectors = net
        .connectors()
        .iter()
        .filter(|c| match block {
            Some(id) => c.source == id || c.target == id,
            None => c.signal.as_deref() == Some(subject),
        })
        .map(|c| net.describe_connector(c))
        .collect();

    Ok(TraceReport {
        subject: subject.to_owned(),
        kind,
        referencing_views,
        referencing_machines,
        net_connectors,
    })
}
