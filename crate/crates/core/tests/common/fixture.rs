//! The central-locking corpus and a catalogue of single-fault mutations.

use std::collections::BTreeSet;
use std::path::PathBuf;

use fnet::{check_all, parse_model, Model, Severity};

pub const FILES: [&str; 5] = [
    "net.fnet",
    "autolock.fnet",
    "variants.fnet",
    "degradation.fnet",
    "features.fnet",
];

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/central_locking")
}

pub fn paths() -> Vec<PathBuf> {
    FILES.iter().map(|f| dir().join(f)).collect()
}

/// `(file name, text)` for every corpus file.
pub fn sources() -> Vec<(String, String)> {
    FILES
        .iter()
        .map(|f| {
            (
                f.to_string(),
                std::fs::read_to_string(dir().join(f)).unwrap(),
            )
        })
        .collect()
}

pub fn model() -> Model {
    parse_model(&sources()).expect("fixture corpus parses")
}

/// One textual edit: replace the single occurrence of `from` in `file`.
pub struct Edit {
    pub file: &'static str,
    pub from: &'static str,
    pub to: &'static str,
}

pub struct Mutation {
    pub name: &'static str,
    pub code: &'static str,
    pub edits: &'static [Edit],
}

const fn edit(file: &'static str, from: &'static str, to: &'static str) -> Edit {
    Edit { file, from, to }
}

const NET_END: &str = "  CentralLocking -> right : OpenClose;\n}";

pub const MUTATIONS: &[Mutation] = &[
    Mutation {
        name: "duplicate button",
        code: "WF01",
        edits: &[edit("net.fnet", "    block ButtonOff;\n", "    block ButtonOff;\n    block ButtonOff;\n")],
    },
    Mutation {
        name: "duplicate children of a new block",
        code: "WF01",
        edits: &[edit("net.fnet", "  use left: Door;\n", "  block Spare {\n    block A;\n    block A;\n  }\n  use left: Door;\n")],
    },
    Mutation {
        name: "connector to a missing block",
        code: "WF02",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CLRequestProc -> Nowhere : Ghost;\n}")],
    },
    Mutation {
        name: "connector from a missing child",
        code: "WF02",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CLRequestProc.Missing -> CentralLocking : Ghost;\n}")],
    },
    Mutation {
        name: "self-connector",
        code: "WF02",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CentralLocking -> CentralLocking : Loop;\n}")],
    },
    Mutation {
        name: "unlabelled net connector",
        code: "WF03",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CLRequestProc -> CentralLocking;\n}")],
    },
    Mutation {
        name: "unlabelled connector into an instance",
        code: "WF03",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CentralLocking.EvalSpeed -> left.LockCtrl;\n}")],
    },
    Mutation {
        name: "env block in the net",
        code: "WF04",
        edits: &[edit("net.fnet", "  use right: Door;\n", "  use right: Door;\n  env block LockActuator;\n")],
    },
    Mutation {
        name: "ext block in the net",
        code: "WF04",
        edits: &[edit("net.fnet", "  use right: Door;\n", "  use right: Door;\n  ext block Gateway;\n")],
    },
    Mutation {
        name: "mechanical interaction in the net",
        code: "WF04",
        edits: &[edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CentralLocking -[M]-> left : OpenClose;\n}")],
    },
    Mutation {
        name: "self-instantiating def",
        code: "WF05",
        edits: &[edit("net.fnet", "    block LockCtrl;\n", "    block LockCtrl;\n    use inner: Door;\n")],
    },
    Mutation {
        name: "mutually recursive defs",
        code: "WF05",
        edits: &[edit(
            "net.fnet",
            "  block CLRequestProc {",
            "  def Ping {\n    use pong: Pong;\n  }\n  def Pong {\n    use ping: Ping;\n  }\n  block CLRequestProc {",
        )],
    },
    Mutation {
        name: "settings unit not marked ext",
        code: "C1",
        edits: &[edit("autolock.fnet", "ext block CentralSettingsUnit;", "block CentralSettingsUnit;")],
    },
    Mutation {
        name: "renamed door",
        code: "C1",
        edits: &[edit("variants.fnet", "  block left;\n  block right;\n  CLRequestProc -> CentralLocking : DriverRequestCL;\n}\n\nview Premium", "  block leftDoor;\n  block right;\n  CLRequestProc -> CentralLocking : DriverRequestCL;\n}\n\nview Premium")],
    },
    Mutation {
        name: "ambiguous lock control",
        code: "C1",
        edits: &[edit("variants.fnet", "view Basic variant for CarComfort {\n", "view Basic variant for CarComfort {\n  block LockCtrl;\n")],
    },
    Mutation {
        name: "button inside central locking",
        code: "C2",
        edits: &[edit("autolock.fnet", "    block EvalSpeed;\n", "    block EvalSpeed;\n    block ButtonOn;\n")],
    },
    Mutation {
        name: "door inside central locking",
        code: "C2",
        edits: &[edit("autolock.fnet", "    block EvalSpeed;\n", "    block EvalSpeed;\n    block left;\n")],
    },
    Mutation {
        name: "button beside its parent",
        code: "C3",
        edits: &[edit("variants.fnet", "view Basic variant for CarComfort {\n  block CLRequestProc;\n", "view Basic variant for CarComfort {\n  block CLRequestProc;\n  block ButtonOn;\n")],
    },
    Mutation {
        name: "speed evaluation beside central locking",
        code: "C3",
        edits: &[edit("autolock.fnet", "  block CentralLocking {\n    block EvalSpeed;\n  }\n", "  block CentralLocking;\n  block EvalSpeed;\n")],
    },
    Mutation {
        name: "reversed driver request",
        code: "C4",
        edits: &[edit("variants.fnet", "view Basic variant for CarComfort {\n  block CLRequestProc;\n  block CentralLocking;\n  block left;\n  block right;\n  CLRequestProc -> CentralLocking : DriverRequestCL;", "view Basic variant for CarComfort {\n  block CLRequestProc;\n  block CentralLocking;\n  block left;\n  block right;\n  CentralLocking -> CLRequestProc : DriverRequestCL;")],
    },
    Mutation {
        name: "wrong signal to left door",
        code: "C4",
        edits: &[edit("variants.fnet", "  CentralLocking -> left : OpenClose;", "  CentralLocking -> left : DriverRequestCL;")],
    },
    Mutation {
        name: "invented internal flow",
        code: "C4",
        edits: &[edit("autolock.fnet", "  CentralLocking -[M]-> LockActuator;", "  CentralLocking -[M]-> LockActuator;\n  CentralLocking.EvalSpeed -> CentralLocking;")],
    },
    Mutation {
        name: "status drawn from parent while button shown",
        code: "C5",
        edits: &[edit("variants.fnet", "view Basic variant for CarComfort {\n  block CLRequestProc;\n", "view Basic variant for CarComfort {\n  block CLRequestProc {\n    block ButtonOff;\n  }\n  CLRequestProc -> CLRequestProc : StatusOff;\n")],
    },
    Mutation {
        name: "lock request drawn from parent while button shown",
        code: "C5",
        edits: &[
            edit("net.fnet", NET_END, "  CentralLocking -> right : OpenClose;\n  CLRequestProc.ButtonOn -> CentralLocking : LockRequest;\n}"),
            edit("variants.fnet", "view Basic variant for CarComfort {\n  block CLRequestProc;\n", "view Basic variant for CarComfort {\n  block CLRequestProc {\n    block ButtonOn;\n  }\n  CLRequestProc -> CentralLocking : LockRequest;\n"),
        ],
    },
];

/// Further mutations for the mode-machine and view-shape codes.
pub const EXTRA_MUTATIONS: &[Mutation] = &[
    Mutation {
        name: "degraded mode binds a missing view",
        code: "M01",
        edits: &[edit(
            "degradation.fnet",
            "uses view CarComfortDegradation;",
            "uses view Missing;",
        )],
    },
    Mutation {
        name: "fault on an unknown signal",
        code: "M02",
        edits: &[edit(
            "degradation.fnet",
            "fault(StatusOff)",
            "fault(NoSuchSignal)",
        )],
    },
    Mutation {
        name: "unreachable third mode",
        code: "M03",
        edits: &[edit(
            "degradation.fnet",
            "  mode CarComfortDegradation uses",
            "  mode Parked uses complete;\n  mode CarComfortDegradation uses",
        )],
    },
    Mutation {
        name: "degradation view shows a missing block",
        code: "M04",
        edits: &[edit(
            "degradation.fnet",
            "  block right {\n",
            "  block Trunk;\n  block right {\n",
        )],
    },
    Mutation {
        name: "empty view",
        code: "V01",
        edits: &[edit(
            "autolock.fnet",
            "view AutoLock feature for CarComfort {",
            "view Empty for CarComfort {}\n\nview AutoLock feature for CarComfort {",
        )],
    },
    Mutation {
        name: "empty mode view",
        code: "V01",
        edits: &[edit(
            "degradation.fnet",
            "modes CarComfortModes",
            "view Standby mode for CarComfort {}\n\nmodes CarComfortModes",
        )],
    },
];

/// The corpus with `m` applied.
pub fn mutated_sources(m: &Mutation) -> Vec<(String, String)> {
    let mut srcs = sources();
    for e in m.edits {
        let (_, text) = srcs.iter_mut().find(|(f, _)| f == e.file).unwrap();
        assert_eq!(
            text.matches(e.from).count(),
            1,
            "{}: edit anchor must be unique in {}",
            m.name,
            e.file
        );
        *text = text.replacen(e.from, e.to, 1);
    }
    srcs
}

/// The codes a mutated corpus produces: error codes when there are any,
/// otherwise warning codes.
pub fn mutation_codes(m: &Mutation) -> Result<BTreeSet<&'static str>, String> {
    let model = parse_model(&mutated_sources(m)).map_err(|e| e.lines().join("; "))?;
    let reports = check_all(&model);
    let all: Vec<_> = reports
        .values()
        .flat_map(|r| r.diagnostics.iter())
        .collect();
    let errors: BTreeSet<_> = all
        .iter()
        .filter(|d| d.is_error())
        .map(|d| d.code.as_str())
        .collect();
    if !errors.is_empty() {
        return Ok(errors);
    }
    Ok(all
        .iter()
        .filter(|d| d.severity == Severity::Warning)
        .map(|d| d.code.as_str())
        .collect())
}
