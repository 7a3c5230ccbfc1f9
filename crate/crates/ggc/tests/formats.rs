use ggc::formats::*;
use ggc::numeric::{Bound, Grid, ResidualReport};
use ggc_core::expansion::{adjoint_expansion, compose_expansion};
use ggc_core::group::{catalog, GroupLaw};
use ggc_core::invariant::{CanonicalBasis, InvariantFields};
use ggc_core::tau::{composition_coeffs, BuiltinTau, QuantizingFunction};
use proptest::prelude::*;

fn setup(name: &str, m: u32) -> (QuantizingFunction, CanonicalBasis) {
    let law = GroupLaw::bch(&catalog::by_name(name).unwrap()).unwrap();
    let basis = CanonicalBasis::build(&InvariantFields::new(&law), m).unwrap();
    (QuantizingFunction::builtin(&law, BuiltinTau::HalfLog), basis)
}

#[test]
fn catalog_groups_round_trip() {
    for name in ["heisenberg1", "heisenberg2", "abelian2", "engel", "free23"] {
        let alg = catalog::by_name(name).unwrap();
        let text = pretty(&GroupJson::from_algebra(&alg));
        let back = parse_group(&text).unwrap();
        assert_eq!(back, alg, "{name}");
        assert!(back.validate().passed());
    }
}

#[test]
fn group_file_errors() {
    let bad_index = r#"{"name": "g", "dim": 2, "weights": [1, 1], "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}]}"#;
    assert!(matches!(parse_group(bad_index), Err(FormatError::Invalid(_))));
    let short = r#"{"name": "g", "dim": 3, "weights": [1, 1]}"#;
    assert!(matches!(parse_group(short), Err(FormatError::Core(_))));
    let extra = r#"{"name": "g", "dim": 1, "weights": [1], "colour": "red"}"#;
    assert!(matches!(parse_group(extra), Err(FormatError::Json(_))));
    let rat = r#"{"name": "g", "dim": 2, "weights": [1, 1], "brackets": [{"i": 1, "j": 2, "k": 2, "c": "x"}]}"#;
    assert!(matches!(parse_group(rat), Err(FormatError::Core(_))));
}

#[test]
fn tau_round_trip() {
    let (tau, _) = setup("heisenberg2", 1);
    let back = parse_tau(tau.law(), &tau_to_json(&tau)).unwrap();
    assert_eq!(back.coords(), tau.coords());
    let wrong_len = r#"{"tau": ["x1"]}"#;
    assert!(parse_tau(tau.law(), wrong_len).is_err());
}

#[test]
fn tables_round_trip() {
    let (tau, basis) = setup("heisenberg1", 3);
    let (a, b) = composition_coeffs(&tau, &basis, 3).unwrap();
    for t in [a, b] {
        let j = TableJson::from_table(&t);
        let text = pretty(&j);
        let parsed: TableJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_table().unwrap(), t);
    }
    let bad = TableJson { kind: "nonsense".into(), max_weight: 1, entries: vec![] };
    assert!(bad.to_table().is_err());
}

#[test]
fn expansions_round_trip() {
    let (tau, basis) = setup("engel", 2);
    for e in [compose_expansion(&tau, &basis, 2).unwrap(), adjoint_expansion(&tau, &basis, 2).unwrap()] {
        let text = pretty(&ExpansionJson::from_expansion(&e));
        let parsed: ExpansionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_expansion().unwrap(), e);
    }
}

#[test]
fn report_layout() {
    let g = Grid::standard();
    let r = ResidualReport::new("adjoint", &g, 1.5e-17, 1e-10, Bound::Max).param("t", "1/2");
    let text = report_to_json(&r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["grid"], 128);
    assert!(text.contains("\"residual\": 1.50000000000000e-17"));
    assert!(text.contains("\"tolerance\": 1.00000000000000e-10"));
    let keys: Vec<&str> = text.lines().filter_map(|l| l.trim().strip_prefix('"')?.split('"').next()).collect();
    assert_eq!(&keys[..3], ["check", "grid", "params"]);
    let nan = ResidualReport::new("x", &g, f64::NAN, 1.0, Bound::Max);
    let v: serde_json::Value = serde_json::from_str(&report_to_json(&nan)).unwrap();
    assert!(v["residual"].is_null());
    assert_eq!(v["pass"], false);
}

#[test]
fn float_format() {
    assert_eq!(fmt_float(0.0), "0.00000000000000e0");
    assert_eq!(fmt_float(-2.5e-3), "-2.50000000000000e-3");
    assert_eq!(fmt_float(f64::INFINITY), "inf");
}

#[test]
fn number_arrays_stay_inline() {
    #[derive(serde::Serialize)]
    struct S {
        flat: Vec<u32>,
        nested: Vec<Vec<i32>>,
        words: Vec<&'static str>,
        empty: Vec<u32>,
        label: &'static str,
    }
    let s = S { flat: vec![1, 2], nested: vec![vec![0, -1], vec![3]], words: vec!["a", "[1, 2]"], empty: vec![], label: "λ [\n3]" };
    let text = pretty(&s);
    assert!(text.contains("\"flat\": [1, 2]"));
    assert!(text.contains("\"nested\": [[0, -1], [3]]"));
    assert!(text.contains("\"words\": [\n    \"a\",\n    \"[1, 2]\"\n  ]"));
    assert!(text.contains("\"empty\": []"));
    assert!(text.contains("\"label\": \"λ [\\n3]\""));
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back, serde_json::to_value(&s).unwrap());
}

proptest! {
    #[test]
    fn pretty_preserves_values(v in proptest::collection::vec(proptest::collection::vec(-1000i64..1000, 0..4), 0..5), s in "[a-z \\[\\],0-9λ]{0,12}") {
        let value = serde_json::json!({ "rows": v, "text": s });
        let text = pretty(&value);
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, value);
    }
}
