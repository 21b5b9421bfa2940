//! Modelling toolkit for automotive function nets.
//!
//! A complete function net is a hierarchy of blocks exchanging named signals
//! over directed connectors. Views are drawn in the same notation and may
//! omit blocks, signals and hierarchy layers; this crate parses both from
//! `.fnet` text, checks nets for well-formedness and views for consistency
//! with their net, validates mode machines, and reports on variant coverage,
//! feature traceability and mode differences.

pub mod analysis;
pub mod cli;
pub mod consistency;
pub mod diagnostics;
pub mod dot;
pub mod expand;
pub mod model;
pub mod modes;
pub mod span;
pub mod syntax;

pub use analysis::{trace, variant_report, AnalysisError, TraceReport, VariantReport};
pub use consistency::{check_all, check_net, check_view, identify, Identification};

pub use diagnostics::{CheckReport, Code, Diagnostic, Severity, Target, TargetKind, Verdict};
pub use expand::{expand, ExpandError, ExpandedNet, NodeId, UnknownPath};
pub use model::*;
pub use modes::{check_machine, mode_diff, DiffReport, ModeError};
pub use span::SourceSpan;
pub use syntax::{parse_file, parse_model, print_model, LoadError, ParseError};
