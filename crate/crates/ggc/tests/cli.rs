mod common;

use ggc::cli;
use ggc::formats::{parse_tau, ExpansionJson};
use ggc_core::group::{catalog, GroupLaw};

#[test]
fn golden_transcripts() {
    let failures = common::check_goldens();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn transcripts_are_deterministic() {
    let differ = common::check_determinism();
    assert!(differ.is_empty(), "nondeterministic: {differ:?}");
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["ggc"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn in_process_matches_binary_contract() {
    let (code, out, _) = run(&["group", "law", "heisenberg1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last(), Some("x3 + y3 + 1/2 x1 y2 - 1/2 x2 y1"));
    let (code, out, _) = run(&["tau", "validate", "heisenberg1", "kn"]);
    assert_eq!(code, 0);
    assert!(out.contains("symmetric: no; residual: x1"));
    let (code, _, err) = run(&["group", "law", "heisenberg1", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("--bogus"));
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ggc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tau.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["tau", "builtin", "heisenberg1", "mr", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let law = GroupLaw::bch(&catalog::heisenberg(1)).unwrap();
    let tau = parse_tau(&law, &std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(tau.coords()[2].to_string(), "1/2 x3 + 1/24 x1 x2");
    // The emitted file is accepted back as input.
    let (code, out, _) = run(&["tau", "validate", "heisenberg1", p]);
    assert_eq!(code, 0);
    assert!(out.ends_with("HP: ok; symmetric: yes\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn expansion_json_round_trips_through_cli() {
    let (code, out, _) = run(&["expand", "compose", "heisenberg1", "half-log", "--orders", "2", "--json"]);
    assert_eq!(code, 0);
    let parsed: ExpansionJson = serde_json::from_str(&out).unwrap();
    let e = parsed.to_expansion().unwrap();
    assert_eq!(e.term_count(), 23);
    let (_, text, _) = run(&["expand", "compose", "heisenberg1", "half-log", "--orders", "2"]);
    assert_eq!(format!("{e}\n"), text);
}

#[test]
fn tolerance_override() {
    let (code, _, _) = run(&["numeric", "adjoint-check", "--t", "0", "--tol", "1"]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["numeric", "adjoint-check", "--tol=0"]);
    assert_eq!(code, 2);
    assert!(err.contains("tolerance"));
}

#[test]
fn fixtures_exist() {
    for f in ["heisenberg1.json", "abelian2.json", "engel.json", "bad-jacobi.json", "family-h1.json"] {
        assert!(common::exists(&common::fixture(f)), "{f}");
    }
}
