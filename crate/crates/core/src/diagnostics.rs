//! Coded findings and per-target check reports.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::span::SourceSpan;

/// Diagnostic catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Duplicate sibling name.
    WF01,
    /// Unresolved connector endpoint; also self-connector (warning).
    WF02,
    /// Complete-net connector without a signal.
    WF03,
    /// View-only stereotype (`ext`, `env`, M/H/E) inside the complete net.
    WF04,
    /// Recursive instantiation.
    WF05,
    /// View block absent from the complete net, or not uniquely identifiable.
    C1,
    /// View whole-part relation missing from the complete net.
    C2,
    /// Complete-net containment not reproduced in the view.
    C3,
    /// View connector without a matching complete-net connector.
    C4,
    /// View connector drawn to a super-block although the exact endpoint is shown.
    C5,
    /// Mode binds an unknown view.
    M01,
    /// Fault trigger names a signal absent from the complete net.
    M02,
    /// Mode unreachable from the initial mode.
    M03,
    /// Mode's bound view is inconsistent.
    M04,
    /// View without any block.
    V01,
}

impl Code {
    pub const ALL: [Code; 15] = [
        Code::WF01,
        Code::WF02,
        Code::WF03,
        Code::WF04,
        Code::WF05,
        Code::C1,
        Code::C2,
        Code::C3,
        Code::C4,
        Code::C5,
        Code::M01,
        Code::M02,
        Code::M03,
        Code::M04,
        Code::V01,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::WF01 => "WF01",
            Code::WF02 => "WF02",
            Code::WF03 => "WF03",
            Code::WF04 => "WF04",
            Code::WF05 => "WF05",
            Code::C1 => "C1",
            Code::C2 => "C2",
            Code::C3 => "C3",
            Code::C4 => "C4",
            Code::C5 => "C5",
            Code::M01 => "M01",
            Code::M02 => "M02",
            Code::M03 => "M03",
            Code::M04 => "M04",
            Code::V01 => "V01",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Severity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub span: SourceSpan,
    /// Block path or connector rendering the finding is about.
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(
        code: Code,
        span: &SourceSpan,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            code,
            severity: Severity::Error,
            span: span.clone(),
            subject: subject.into(),
            message: message.into(),
        }
    }

    pub fn warning(
        code: Code,
        span: &SourceSpan,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, span, subject, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `CODE severity file:line:col subject`, then U+2014 and the message.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} \u{2014} {}",
            self.code, self.severity, self.span, self.subject, self.message
        )
    }
}

// Field order is part of the JSON contract.
#[derive(Serialize)]
struct DiagnosticRecord<'a> {
    code: Code,
    severity: Severity,
    file: &'a str,
    line: u32,
    column: u32,
    subject: &'a str,
    message: &'a str,
}

impl Serialize for Diagnostic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DiagnosticRecord {
            code: self.code,
            severity: self.severity,
            file: &self.span.file,
            line: self.span.line,
            column: self.span.column,
            subject: &self.subject,
            message: &self.message,
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Net,
    View,
    Machine,
}

/// What a report is about. Orders nets before views before machines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Target {
    pub kind: TargetKind,
    pub name: String,
}

impl Target {
    pub fn net(name: impl Into<String>) -> Self {
        Self {
            kind: TargetKind::Net,
            name: name.into(),
        }
    }

    pub fn view(name: impl Into<String>) -> Self {
        Self {
            kind: TargetKind::View,
            name: name.into(),
        }
    }

    pub fn machine(name: impl Into<String>) -> Self {
        Self {
            kind: TargetKind::Machine,
            name: name.into(),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TargetKind::Net => "net",
            TargetKind::View => "view",
            TargetKind::Machine => "modes",
        };
        write!(f, "{kind} {}", self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub target: Target,
    pub diagnostics: Vec<Diagnostic>,
}

impl CheckReport {
    /// Orders the findings by source position; ties keep emission order.
    pub fn new(target: Target, mut diagnostics: Vec<Diagnostic>) -> Self {
        diagnostics.sort_by(|a, b| {
            (&a.span.file, a.span.line, a.span.column).cmp(&(
                &b.span.file,
                b.span.line,
                b.span.column,
            ))
        });
        Self {
            target,
            diagnostics,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.diagnostics.iter().any(Diagnostic::is_error) {
            Verdict::Inconsistent
        } else {
            Verdict::Consistent
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.verdict() == Verdict::Consistent
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    /// Distinct error codes, sorted.
    pub fn error_codes(&self) -> Vec<Code> {
        let mut codes: Vec<Code> = self.errors().map(|d| d.code).collect();
        codes.sort();
        codes.dedup();
        codes
    }
}

impl Serialize for CheckReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            target: &'a str,
            kind: TargetKind,
            verdict: Verdict,
            diagnostics: &'a [Diagnostic],
        }
        Record {
            target: &self.target.name,
            kind: self.target.kind,
            verdict: self.verdict(),
            diagnostics: &self.diagnostics,
        }
        .serialize(serializer)
    }
}
