//! Golden-file cases for the command-line tool, shared by the CLI tests and
//! the acceptance run.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub exit: i32,
    /// Floating-point output is compared run-to-run only, not against a file.
    pub golden: bool,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, env: &[], exit, golden: true }
}

const fn float_case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, env: &[], exit, golden: false }
}

pub const CASES: &[Case] = &[
    case("group-law-heisenberg1", &["group", "law", "tests/fixtures/heisenberg1.json"], 0),
    case("group-law-abelian2", &["group", "law", "tests/fixtures/abelian2.json"], 0),
    case("group-law-heisenberg2-json", &["group", "law", "heisenberg2", "--json"], 0),
    case("group-law-engel", &["group", "law", "tests/fixtures/engel.json"], 0),
    case("group-validate-engel", &["group", "validate", "tests/fixtures/engel.json"], 0),
    case("group-validate-bad-jacobi", &["group", "validate", "tests/fixtures/bad-jacobi.json"], 1),
    case("group-validate-bad-jacobi-json", &["group", "validate", "tests/fixtures/bad-jacobi.json", "--json"], 1),
    case("group-validate-bad-gradation", &["group", "validate", "tests/fixtures/bad-gradation.json"], 1),
    case("group-law-bad-jacobi", &["group", "law", "tests/fixtures/bad-jacobi.json"], 1),
    case("group-validate-malformed", &["group", "validate", "tests/fixtures/malformed.json"], 2),
    case("group-unknown", &["group", "law", "no-such-group"], 2),
    case("tau-validate-family", &["tau", "validate", "heisenberg1", "tests/fixtures/family-h1.json"], 0),
    case("tau-validate-kn", &["tau", "validate", "heisenberg1", "kn"], 0),
    case("tau-validate-right", &["tau", "validate", "abelian1", "right"], 0),
    case("tau-validate-pathological", &["tau", "validate", "heisenberg1", "tests/fixtures/pathological-h1.json"], 1),
    case("tau-validate-mr", &["tau", "validate", "heisenberg1", "mr"], 0),
    case("tau-builtin-engel", &["tau", "builtin", "engel", "half-log"], 0),
    case("tau-builtin-mr-heisenberg2", &["tau", "builtin", "heisenberg2", "mr"], 0),
    case("tau-unknown", &["tau", "builtin", "heisenberg1", "left"], 2),
    case("coeffs-compose-heisenberg1", &["coeffs", "compose", "heisenberg1", "half-log", "--max-weight", "2"], 0),
    case("coeffs-compose-heisenberg1-kn", &["coeffs", "compose", "heisenberg1", "kn", "--max-weight", "2"], 0),
    case("coeffs-adjoint-family", &["coeffs", "adjoint", "heisenberg1", "tests/fixtures/family-h1.json", "--max-weight", "3"], 0),
    case("coeffs-adjoint-kn", &["coeffs", "adjoint", "heisenberg1", "kn", "--max-weight", "2"], 0),
    case("coeffs-change-abelian1", &["coeffs", "change", "abelian1", "half-log", "--max-weight", "3"], 0),
    case("coeffs-change-from-kn", &["coeffs", "change", "heisenberg1", "half-log", "--max-weight", "2", "--direction", "from-kn"], 0),
    case("coeffs-pathological", &["coeffs", "compose", "heisenberg1", "tests/fixtures/pathological-h1.json"], 1),
    case("expand-compose-heisenberg1", &["expand", "compose", "heisenberg1", "half-log", "--orders", "2"], 0),
    case("expand-compose-heisenberg1-json", &["expand", "compose", "heisenberg1", "half-log", "--orders", "2", "--json"], 0),
    case("expand-compose-heisenberg1-mr", &["expand", "compose", "heisenberg1", "mr", "--orders", "2"], 0),
    case("expand-compose-abelian1", &["expand", "compose", "abelian1", "half-log", "--orders", "3"], 0),
    case("expand-adjoint-kn", &["expand", "adjoint", "heisenberg1", "kn", "--orders", "2"], 0),
    case("expand-adjoint-family", &["expand", "adjoint", "heisenberg1", "tests/fixtures/family-h1.json", "--orders", "3"], 0),
    case("expand-change-abelian1", &["expand", "change", "abelian1", "half-log", "--orders", "3"], 0),
    Case {
        name: "expand-weight-cap",
        args: &["expand", "compose", "engel", "half-log", "--orders", "4"],
        env: &[("GGC_MAX_WEIGHT", "3")],
        exit: 1,
        golden: true,
    },
    case("poisson-engel", &["poisson", "engel"], 0),
    case("poisson-heisenberg2-json", &["poisson", "heisenberg2", "--json"], 0),
    case("poisson-heisenberg1-mr", &["poisson", "heisenberg1", "--tau", "mr"], 0),
    case("poisson-heisenberg1-kn", &["poisson", "heisenberg1", "--tau", "kn"], 1),
    case("usage-none", &[], 2),
    case("usage-bad-subcommand", &["group", "explode", "heisenberg1"], 2),
    float_case("numeric-adjoint-weyl", &["numeric", "adjoint-check"], 0),
    float_case("numeric-adjoint-kn", &["numeric", "adjoint-check", "--t", "0"], 3),
    float_case("numeric-moyal", &["numeric", "moyal-check", "--json"], 0),
    float_case("numeric-moyal-short", &["numeric", "moyal-check", "--orders", "2"], 3),
    float_case("numeric-rep", &["numeric", "rep-check"], 0),
    float_case("numeric-metaplectic-j", &["numeric", "metaplectic-check", "--kind", "j"], 0),
    float_case("numeric-metaplectic-chirp", &["numeric", "metaplectic-check", "--kind", "chirp", "--param", "0.5", "--json"], 0),
    float_case("numeric-bad-grid", &["numeric", "rep-check", "--grid", "100"], 2),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(c: &Case) -> PathBuf {
    crate_dir().join("tests/fixtures/golden").join(format!("{}.txt", c.name))
}

/// Runs one case and renders exit code, stdout and stderr as a transcript.
pub fn run(c: &Case) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ggc"));
    cmd.current_dir(crate_dir()).args(c.args).env_remove("GGC_MAX_WEIGHT");
    for (k, v) in c.env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let mut t = format!("$ ggc {}\n", c.args.join(" "));
    for (k, v) in c.env {
        t = format!("$ {k}={v}\n{t}");
    }
    t += &format!("exit: {code}\n--- stdout\n{}--- stderr\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    (code, t)
}

/// Compares every golden case with its stored transcript; with `GGC_BLESS`
/// set the transcripts are rewritten instead. Returns failure descriptions.
pub fn check_goldens() -> Vec<String> {
    let bless = std::env::var_os("GGC_BLESS").is_some();
    let mut failures = Vec::new();
    for c in CASES {
        let (code, text) = run(c);
        if code != c.exit {
            failures.push(format!("{}: exit {code}, expected {}\n{text}", c.name, c.exit));
            continue;
        }
        if !c.golden {
            continue;
        }
        let path = golden_path(c);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else {
            match std::fs::read_to_string(&path) {
                Ok(want) if want == text => {}
                Ok(want) => failures.push(format!("{}: output differs\n--- want\n{want}--- got\n{text}", c.name)),
                Err(e) => failures.push(format!("{}: {}: {e}", c.name, path.display())),
            }
        }
    }
    failures
}

/// Runs the whole suite twice and reports cases whose transcripts differ.
pub fn check_determinism() -> Vec<String> {
    let first: Vec<String> = CASES.iter().map(|c| run(c).1).collect();
    let second: Vec<String> = CASES.iter().map(|c| run(c).1).collect();
    CASES.iter().zip(first.iter().zip(&second)).filter(|(_, (a, b))| a != b).map(|(c, _)| c.name.to_string()).collect()
}

pub fn fixture(name: &str) -> PathBuf {
    crate_dir().join("tests/fixtures").join(name)
}

pub fn exists(p: &Path) -> bool {
    p.is_file()
}
