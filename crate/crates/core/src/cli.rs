//! The `fnet` command line.
//!
//! Exit codes: 0 when every selected target is consistent (or the command
//! succeeded), 1 when inconsistencies or formatting drift were found, 2 on
//! unreadable files, syntax or model errors, bad usage and unknown names.
//! With `--json` every outcome, errors included, is a single JSON document
//! on standard output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{trace, variant_report, AnalysisError, TraceReport, VariantReport};
use crate::consistency::check_all;
use crate::diagnostics::{CheckReport, Severity, TargetKind};
use crate::dot::{net_to_dot, view_to_dot};
use crate::model::Model;
use crate::modes::{mode_diff, Content, DiffReport, ModeError};
use crate::syntax::{parse_file, parse_model, print_documents};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fnet",
    version,
    about = "Check, export and analyse .fnet function-net models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the net, every view and every mode machine.
    Check(CheckArgs),
    /// Render the net or one view as a Graphviz digraph.
    ExportDot(ExportArgs),
    /// Variant coverage, traceability or mode differences.
    Report(ReportArgs),
    /// Rewrite files in canonical form.
    Fmt(FmtArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Only report on this view (repeatable).
    #[arg(long = "view", value_name = "NAME")]
    views: Vec<String>,
    /// Only report on this mode machine (repeatable).
    #[arg(long = "machine", value_name = "NAME")]
    machines: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// `net`, the net's name, or a view name.
    #[arg(long)]
    target: String,
    /// Write the graph here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["variants", "trace", "mode_diff"])))]
struct ReportArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Coverage of a variant group.
    #[arg(long, value_name = "GROUP")]
    variants: Option<String>,
    /// Views and machines referring to a block path or signal.
    #[arg(long, value_name = "SUBJECT")]
    trace: Option<String>,
    /// Differences between two modes of a machine.
    #[arg(long, num_args = 3, value_names = ["MACHINE", "A", "B"])]
    mode_diff: Option<Vec<String>>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct FmtArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Report files that are not canonical instead of rewriting them.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    json: bool,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// A failure that ends the run with exit code 2.
struct Failure {
    kind: &'static str,
    messages: Vec<String>,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            messages: vec![message.into()],
        }
    }

    fn render(self, json: bool) -> Outcome {
        if json {
            let doc = json!({"error": {"kind": self.kind, "messages": self.messages}});
            Outcome::ok(EXIT_ERROR, to_json(&doc))
        } else {
            let mut stderr = String::new();
            for m in &self.messages {
                let _ = writeln!(stderr, "error: {m}");
            }
            Outcome {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome::ok(EXIT_OK, e.to_string());
        }
        Err(e) => {
            return if json {
                Failure::new("usage", e.kind().to_string()).render(true)
            } else {
                Outcome {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: e.to_string(),
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::ExportDot(a) => cmd_export(a),
        Command::Report(a) => cmd_report(a),
        Command::Fmt(a) => cmd_fmt(a),
    };
    result.unwrap_or_else(|f| f.render(json))
}

fn read_sources(paths: &[PathBuf]) -> Result<Vec<(String, String)>, Failure> {
    paths
        .iter()
        .map(|p| {
            let name = p.display().to_string();
            std::fs::read_to_string(p)
                .map(|text| (name.clone(), text))
                .map_err(|e| Failure::new("io", format!("cannot read {name}: {e}")))
        })
        .collect()
}

fn load(paths: &[PathBuf]) -> Result<Model, Failure> {
    let sources = read_sources(paths)?;
    parse_model(&sources).map_err(|e| Failure {
        kind: match e {
            crate::syntax::LoadError::Parse(_) => "parse",
            crate::syntax::LoadError::Merge(_) => "model",
        },
        messages: e.lines(),
    })
}

fn cmd_check(args: &CheckArgs) -> Result<Outcome, Failure> {
    let model = load(&args.paths)?;
    for v in &args.views {
        if !model.views.contains_key(v) {
            return Err(Failure::new("unknown-name", format!("unknown view `{v}`")));
        }
    }
    for m in &args.machines {
        if !model.machines.contains_key(m) {
            return Err(Failure::new(
                "unknown-name",
                format!("unknown mode machine `{m}`"),
            ));
        }
    }
    let filtered = !args.views.is_empty() || !args.machines.is_empty();
    let reports: Vec<CheckReport> = check_all(&model)
        .into_values()
        .filter(|r| {
            !filtered
                || match r.target.kind {
                    TargetKind::Net => false,
                    TargetKind::View => args.views.contains(&r.target.name),
                    TargetKind::Machine => args.machines.contains(&r.target.name),
                }
        })
        .collect();

    let inconsistent = reports.iter().filter(|r| !r.is_consistent()).count();
    let code = if inconsistent == 0 {
        EXIT_OK
    } else {
        EXIT_FINDINGS
    };
    let errors: usize = reports.iter().map(|r| r.errors().count()).sum();
    let warnings: usize = reports
        .iter()
        .map(|r| {
            r.diagnostics
                .iter()
                .filter(|d| d.severity == Severity::Warning)
                .count()
        })
        .sum();

    if args.json {
        let doc = json!({
            "reports": reports,
            "summary": {
                "targets": reports.len(),
                "inconsistent": inconsistent,
                "errors": errors,
                "warnings": warnings,
            },
        });
        return Ok(Outcome::ok(code, to_json(&doc)));
    }

    let mut out = String::new();
    for r in &reports {
        let _ = writeln!(out, "{}: {}", r.target, r.verdict());
        for d in &r.diagnostics {
            let _ = writeln!(out, "{d}");
        }
    }
    if inconsistent == 0 {
        out.push_str("all targets consistent\n");
    } else {
        let _ = writeln!(
            out,
            "{inconsistent} of {} target(s) inconsistent: {errors} error(s), {warnings} warning(s)",
            reports.len()
        );
    }
    Ok(Outcome::ok(code, out))
}

fn cmd_export(args: &ExportArgs) -> Result<Outcome, Failure> {
    let model = load(&args.paths)?;
    let dot = if args.target == "net" || args.target == model.net.name {
        net_to_dot(&model.net)
    } else if let Some(view) = model.views.get(&args.target) {
        view_to_dot(view)
    } else {
        return Err(Failure::new(
            "unknown-name",
            format!(
                "unknown export target `{}`: expected `net` or a view name",
                args.target
            ),
        ));
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &dot)
                .map_err(|e| Failure::new("io", format!("cannot write {}: {e}", path.display())))?;
            let stdout = if args.json {
                to_json(&json!({"target": args.target, "out": path.display().to_string()}))
            } else {
                String::new()
            };
            Ok(Outcome::ok(EXIT_OK, stdout))
        }
        None if args.json => Ok(Outcome::ok(
            EXIT_OK,
            to_json(&json!({"target": args.target, "dot": dot})),
        )),
        None => Ok(Outcome::ok(EXIT_OK, dot)),
    }
}

fn cmd_report(args: &ReportArgs) -> Result<Outcome, Failure> {
    let model = load(&args.paths)?;
    if let Some(group) = &args.variants {
        return match variant_report(group, &model) {
            Ok(r) => Ok(Outcome::ok(
                EXIT_OK,
                if args.json {
                    to_json(&r)
                } else {
                    variants_text(&r)
                },
            )),
            Err(e @ AnalysisError::InconsistentVariantView(_)) => {
                Ok(findings(args.json, "inconsistent-view", e))
            }
            Err(e) => Err(Failure::new("unknown-name", e.to_string())),
        };
    }
    if let Some(subject) = &args.trace {
        let r = trace(subject, &model).map_err(|e| Failure::new("unknown-name", e.to_string()))?;
        return Ok(Outcome::ok(
            EXIT_OK,
            if args.json {
                to_json(&r)
            } else {
                trace_text(&r)
            },
        ));
    }
    let Some([machine, a, b]) = args.mode_diff.as_deref() else {
        unreachable!("clap requires exactly one query with three mode-diff values");
    };
    let m = model
        .machines
        .get(machine)
        .ok_or_else(|| Failure::new("unknown-name", format!("unknown mode machine `{machine}`")))?;
    match mode_diff(m, a, b, &model) {
        Ok(r) => Ok(Outcome::ok(
            EXIT_OK,
            if args.json {
                to_json(&r)
            } else {
                diff_text(a, b, &r)
            },
        )),
        Err(e @ ModeError::InconsistentView { .. }) => {
            Ok(findings(args.json, "inconsistent-view", e))
        }
        Err(e) => Err(Failure::new("unknown-name", e.to_string())),
    }
}

/// An analysis refused because the model is inconsistent: exit 1.
fn findings(json: bool, kind: &str, e: impl std::fmt::Display) -> Outcome {
    if json {
        Outcome::ok(
            EXIT_FINDINGS,
            to_json(&json!({"error": {"kind": kind, "messages": [e.to_string()]}})),
        )
    } else {
        Outcome {
            code: EXIT_FINDINGS,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn list(items: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    let items: Vec<String> = items.into_iter().map(|s| s.as_ref().to_owned()).collect();
    if items.is_empty() {
        "(none)".to_owned()
    } else {
        items.join(", ")
    }
}

/// A two-column table: element, then the variants holding it.
fn holder_table(
    out: &mut String,
    title: &str,
    rows: &std::collections::BTreeMap<String, std::collections::BTreeSet<String>>,
) {
    let _ = writeln!(out, "{title}:");
    if rows.is_empty() {
        out.push_str("  (none)\n");
        return;
    }
    let width = rows.keys().map(String::len).max().unwrap_or(0);
    for (item, holders) in rows {
        let _ = writeln!(out, "  {item:<width$}  {}", list(holders));
    }
}

fn variants_text(r: &VariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "variant group {}: {}",
        r.group,
        list(r.per_variant.keys())
    );
    let _ = writeln!(out, "common blocks: {}", list(&r.common));
    holder_table(&mut out, "variant-specific blocks", &r.variant_specific);
    let _ = writeln!(out, "uncovered blocks: {}", list(&r.uncovered));
    let _ = writeln!(out, "common signals: {}", list(&r.common_signals));
    holder_table(
        &mut out,
        "variant-specific signals",
        &r.variant_specific_signals,
    );
    out
}

fn trace_text(r: &TraceReport) -> String {
    let kind = match r.kind {
        crate::analysis::SubjectKind::Block => "block",
        crate::analysis::SubjectKind::Signal => "signal",
    };
    let mut out = String::new();
    let _ = writeln!(out, "{kind} {}", r.subject);
    let _ = writeln!(
        out,
        "views: {}",
        list(
            r.referencing_views
                .iter()
                .map(|v| format!("{} ({})", v.view, v.kind))
        )
    );
    let _ = writeln!(
        out,
        "machines: {}",
        list(r.referencing_machines.iter().map(|m| {
            let via = match m.via {
                crate::analysis::MachineLink::Binding => "binding",
                crate::analysis::MachineLink::Trigger => "trigger",
            };
            format!("{} ({via})", m.machine)
        }))
    );
    let _ = writeln!(out, "net connectors:");
    if r.net_connectors.is_empty() {
        out.push_str("  (none)\n");
    }
    for c in &r.net_connectors {
        let _ = writeln!(out, "  {c}");
    }
    out
}

fn diff_text(a: &str, b: &str, r: &DiffReport) -> String {
    let mut out = String::new();
    let mut side = |mode: &str, c: &Content| {
        let _ = writeln!(out, "only in {mode}:");
        let _ = writeln!(out, "  blocks: {}", list(&c.blocks));
        let _ = writeln!(out, "  signals: {}", list(&c.signals));
    };
    side(a, &r.only_in_a);
    side(b, &r.only_in_b);
    out
}

fn cmd_fmt(args: &FmtArgs) -> Result<Outcome, Failure> {
    let sources = read_sources(&args.paths)?;
    let mut formatted = Vec::new();
    let mut errors = Vec::new();
    for (path, text) in &sources {
        match parse_file(path, text) {
            Ok(docs) => formatted.push(print_documents(&docs)),
            Err(errs) => errors.extend(errs.iter().map(ToString::to_string)),
        }
    }
    if !errors.is_empty() {
        return Err(Failure {
            kind: "parse",
            messages: errors,
        });
    }

    let mut changed = Vec::new();
    for ((path, text), canonical) in sources.iter().zip(&formatted) {
        if text == canonical {
            continue;
        }
        if !args.check {
            std::fs::write(path, canonical)
                .map_err(|e| Failure::new("io", format!("cannot write {path}: {e}")))?;
        }
        changed.push(path.as_str());
    }

    let code = if args.check && !changed.is_empty() {
        EXIT_FINDINGS
    } else {
        EXIT_OK
    };
    let stdout = if args.json {
        to_json(&json!({"check": args.check, "changed": changed}))
    } else {
        let verb = if args.check {
            "would reformat"
        } else {
            "reformatted"
        };
        changed.iter().map(|p| format!("{verb} {p}\n")).collect()
    };
    Ok(Outcome::ok(code, stdout))
}
