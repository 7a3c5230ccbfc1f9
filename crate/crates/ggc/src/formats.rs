//! JSON file formats for groups, quantizing functions, coefficient tables,
//! expansions and numeric residual reports.
//!
//! Rationals are always strings (`"-3/8"`); multi-indices are arrays of
//! exponents; bracket indices in group files are 1-based.

use std::collections::BTreeMap;

use ggc_core::expansion::{Expansion, Factor, FormalSymbolTerm, Sym};
use ggc_core::group::{Bracket, GradedLieAlgebra, GroupLaw, ValidationReport};
use ggc_core::poly::{fmt_rational, parse_rational};
use ggc_core::tau::{CoefficientTable, QuantizingFunction, TableKind};
use ggc_core::{MultiIndex, Polynomial, Rational};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::numeric::{Bound, ResidualReport};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] ggc_core::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn rational(s: &str) -> Result<Rational> {
    Ok(parse_rational(s.trim())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub name: String,
    pub dim: usize,
    pub weights: Vec<u32>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

impl GroupJson {
    pub fn to_algebra(&self) -> Result<GradedLieAlgebra> {
        if self.weights.len() != self.dim {
            return Err(ggc_core::Error::DimensionMismatch { expected: self.dim, found: self.weights.len() }.into());
        }
        let mut entries = Vec::new();
        for b in &self.brackets {
            if [b.i, b.j, b.k].iter().any(|&x| x == 0 || x > self.dim) {
                return Err(FormatError::Invalid(format!("bracket index out of range 1..={}: ({}, {}, {})", self.dim, b.i, b.j, b.k)));
            }
            entries.push(Bracket { i: b.i - 1, j: b.j - 1, k: b.k - 1, c: rational(&b.c)? });
        }
        Ok(GradedLieAlgebra::new(&self.name, self.weights.clone(), entries))
    }

    pub fn from_algebra(alg: &GradedLieAlgebra) -> Self {
        GroupJson {
            name: alg.name.clone(),
            dim: alg.dim(),
            weights: alg.weights().to_vec(),
            brackets: alg
                .entries()
                .iter()
                .map(|b| BracketJson { i: b.i + 1, j: b.j + 1, k: b.k + 1, c: fmt_rational(&b.c) })
                .collect(),
        }
    }
}

pub fn parse_group(text: &str) -> Result<GradedLieAlgebra> {
    serde_json::from_str::<GroupJson>(text)?.to_algebra()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauJson {
    pub tau: Vec<String>,
}

pub fn parse_tau(law: &GroupLaw, text: &str) -> Result<QuantizingFunction> {
    let j: TauJson = serde_json::from_str(text)?;
    let c = j.tau.iter().map(|s| s.parse::<Polynomial>()).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(QuantizingFunction::new(law, c)?)
}

pub fn tau_to_json(tau: &QuantizingFunction) -> String {
    pretty(&TauJson { tau: tau.coords().iter().map(ToString::to_string).collect() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub alpha: Vec<u32>,
    pub split: Vec<Vec<u32>>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub kind: String,
    pub max_weight: u32,
    pub entries: Vec<EntryJson>,
}

impl TableJson {
    pub fn from_table(t: &CoefficientTable) -> Self {
        TableJson {
            kind: t.kind.as_str().into(),
            max_weight: t.max_weight,
            entries: t
                .entries
                .iter()
                .map(|((a, s), c)| EntryJson { alpha: a.0.clone(), split: s.iter().map(|m| m.0.clone()).collect(), c: fmt_rational(c) })
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<CoefficientTable> {
        let kind = TableKind::parse(&self.kind).ok_or_else(|| FormatError::Invalid(format!("unknown table kind '{}'", self.kind)))?;
        let mut t = CoefficientTable::new(kind, self.max_weight);
        for e in &self.entries {
            if e.split.len() != kind.split_len() {
                return Err(FormatError::Invalid(format!("{} expects splits of length {}", self.kind, kind.split_len())));
            }
            let key = (MultiIndex(e.alpha.clone()), e.split.iter().map(|s| MultiIndex(s.clone())).collect());
            t.entries.insert(key, rational(&e.c)?);
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub sym: String,
    pub delta: Vec<u32>,
    #[serde(rename = "X")]
    pub x: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: String,
    pub i_power: u8,
    pub factors: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderJson {
    pub j: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionJson {
    pub kind: String,
    pub tau: String,
    pub max_order: u32,
    pub orders: Vec<OrderJson>,
}

impl ExpansionJson {
    pub fn from_expansion(e: &Expansion) -> Self {
        let orders = e
            .orders()
            .map(|j| OrderJson {
                j,
                terms: e
                    .order_terms(j)
                    .iter()
                    .map(|t| TermJson {
                        c: fmt_rational(&t.coeff),
                        i_power: t.i_power,
                        factors: t
                            .factors
                            .iter()
                            .map(|f| FactorJson { sym: f.sym.as_str().into(), delta: f.delta.0.clone(), x: f.deriv.0.clone() })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        ExpansionJson { kind: e.kind.clone(), tau: e.tau.clone(), max_order: e.max_order, orders }
    }

    pub fn to_expansion(&self) -> Result<Expansion> {
        let mut e = Expansion::new(&self.kind, &self.tau, self.max_order);
        for o in &self.orders {
            for t in &o.terms {
                let mut factors = Vec::new();
                for f in &t.factors {
                    let sym = Sym::parse(&f.sym).ok_or_else(|| FormatError::Invalid(format!("unknown symbol '{}'", f.sym)))?;
                    factors.push(Factor::new(sym, MultiIndex(f.delta.clone()), MultiIndex(f.x.clone())));
                }
                e.add(o.j, FormalSymbolTerm::new(rational(&t.c)?, t.i_power, factors));
            }
        }
        Ok(e)
    }
}

/// Fixed float rendering: 15 significant digits in exponent form.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        format!("{x}")
    }
}

fn raw_float(x: f64) -> Box<RawValue> {
    let s = if x.is_finite() { fmt_float(x) } else { "null".into() };
    RawValue::from_string(s).expect("float literal is valid JSON")
}

#[derive(Serialize)]
struct ReportJson<'a> {
    check: &'a str,
    grid: usize,
    params: &'a BTreeMap<String, String>,
    residual: Box<RawValue>,
    tolerance: Box<RawValue>,
    bound: Bound,
    pass: bool,
    advisories: &'a [String],
}

fn report_json(r: &ResidualReport) -> ReportJson<'_> {
    ReportJson {
        check: &r.check,
        grid: r.grid,
        params: &r.params,
        residual: raw_float(r.residual),
        tolerance: raw_float(r.tolerance),
        bound: r.bound,
        pass: r.pass(),
        advisories: &r.advisories,
    }
}

pub fn report_to_json(r: &ResidualReport) -> String {
    pretty(&report_json(r))
}

pub fn reports_to_json(rs: &[ResidualReport]) -> String {
    pretty(&rs.iter().map(report_json).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesJson {
    pub tables: Vec<TableJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawJson {
    pub name: String,
    pub law: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub kind: String,
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationJson {
    pub name: String,
    pub pass: bool,
    pub violations: Vec<ViolationJson>,
}

impl ValidationJson {
    pub fn new(name: &str, r: &ValidationReport) -> Self {
        ValidationJson {
            name: name.into(),
            pass: r.passed(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson { kind: format!("{:?}", v.kind).to_lowercase(), indices: v.indices.clone(), detail: v.detail.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonJson {
    pub group: String,
    pub first_stratum: Vec<usize>,
    pub factor: String,
    pub pass: bool,
}

/// Pretty JSON with arrays of numbers kept on one line.
pub fn pretty<T: Serialize + ?Sized>(v: &T) -> String {
    inline_number_arrays(&serde_json::to_string_pretty(v).expect("serializable"))
}

fn inline_number_arrays(s: &str) -> String {
    let b = s.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(b.len());
    let mut i = 0;
    let mut in_str = false;
    while i < b.len() {
        let c = b[i];
        if in_str {
            out.push(c);
            if c == b'\\' && i + 1 < b.len() {
                out.push(b[i + 1]);
                i += 1;
            } else if c == b'"' {
                in_str = false;
            }
            i += 1;
            continue;
        }
        if c == b'"' {
            in_str = true;
        } else if c == b'[' {
            if let Some(e) = numeric_array_end(b, i) {
                let compact: String = s[i..=e].chars().filter(|c| !c.is_whitespace()).collect();
                out.extend_from_slice(compact.replace(',', ", ").as_bytes());
                i = e + 1;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    String::from_utf8(out).expect("input was UTF-8")
}

/// End of the array opened at `start` if it holds only numbers and nested
/// arrays of numbers.
fn numeric_array_end(b: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut digits = false;
    for (k, &d) in b.iter().enumerate().skip(start) {
        match d {
            b'[' => depth += 1,
            b']' => {
                depth -= 1;
                if depth == 0 {
                    return digits.then_some(k);
                }
            }
            b'0'..=b'9' => digits = true,
            b'-' | b'+' | b'.' | b'e' | b'E' | b',' | b' ' | b'\n' => {}
            _ => return None,
        }
    }
    None
}
