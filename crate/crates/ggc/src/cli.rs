//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or solver failure, 2 parse or usage
//! error, 3 numeric residual outside tolerance.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ggc_core::expansion::{adjoint_expansion, change_expansion, compose_expansion, poisson_check, poisson_factor, Expansion};
use ggc_core::group::{catalog, GradedLieAlgebra, GroupLaw};
use ggc_core::invariant::{CanonicalBasis, InvariantFields};
use ggc_core::poly::{fmt_rational, parse_rational};
use ggc_core::tau::{
    adjoint_coeffs, change_coeffs, composition_coeffs, mr_tau, poisson_bracket_spec, BuiltinTau, ChangeDirection, HpVerdict, MatrixRep,
    QuantizingFunction,
};

use crate::formats::{self, ExpansionJson, FormatError, TableJson};
use crate::numeric::{self, Grid, MetaplecticKind, ResidualReport};

/// Default cap on the basis weight; `GGC_MAX_WEIGHT` overrides it.
pub const DEFAULT_MAX_WEIGHT: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "ggc", version, about = "Quantization calculus on graded nilpotent Lie groups")]
pub struct Cli {
    /// Upper bound on any basis weight used.
    #[arg(long, env = "GGC_MAX_WEIGHT", default_value_t = DEFAULT_MAX_WEIGHT, global = true)]
    pub weight_cap: u32,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an algebra or print its group law.
    Group {
        #[arg(value_enum)]
        action: GroupAction,
        /// Group file or catalog name (heisenberg<n>, abelian<n>, engel, free23).
        group: String,
    },
    /// Validate a quantizing function or emit a built-in one.
    Tau {
        #[arg(value_enum)]
        action: TauAction,
        group: String,
        /// τ file, or one of kn, right, half-log, mr.
        tau: String,
    },
    /// Coefficient tables as JSON.
    Coeffs {
        #[arg(value_enum)]
        kind: ExpandKind,
        group: String,
        tau: String,
        #[arg(long, default_value_t = 2)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Direction::ToKn)]
        direction: Direction,
    },
    /// Asymptotic expansions.
    Expand {
        #[arg(value_enum)]
        kind: ExpandKind,
        group: String,
        tau: String,
        #[arg(long, default_value_t = 2)]
        orders: u32,
        #[arg(long, value_enum, default_value_t = Direction::ToKn)]
        direction: Direction,
    },
    /// First-stratum Poisson bracket and its check against the composition.
    Poisson {
        group: String,
        #[arg(long, default_value = "half-log")]
        tau: String,
    },
    /// Floating-point oracles.
    Numeric {
        #[arg(value_enum)]
        check: NumericCheck,
        #[command(flatten)]
        opts: NumericOpts,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupAction {
    Validate,
    Law,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauAction {
    Validate,
    Builtin,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandKind {
    Change,
    Adjoint,
    Compose,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ToKn,
    FromKn,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericCheck {
    AdjointCheck,
    MoyalCheck,
    RepCheck,
    MetaplecticCheck,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetaKind {
    Dilation,
    Chirp,
    J,
}

#[derive(Args, Debug)]
pub struct NumericOpts {
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Period as a multiple of π.
    #[arg(long, default_value_t = 16.0)]
    pub period_pi: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Override the check's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Symbol in x1 and xi1 (adjoint-check).
    #[arg(long, default_value = "x1 xi1")]
    pub sigma: String,
    #[arg(long, default_value = "x1^2 xi1")]
    pub s1: String,
    #[arg(long, default_value = "x1 xi1^2")]
    pub s2: String,
    /// Truncation order for moyal-check; defaults to the terminating order.
    #[arg(long)]
    pub orders: Option<u32>,
    /// Quantization parameter t, as a rational.
    #[arg(long, default_value = "1/2")]
    pub t: String,
    #[arg(long, value_enum, default_value_t = MetaKind::J)]
    pub kind: MetaKind,
    /// Dilation factor a or chirp slope c.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub param: f64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    Residual(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Residual(_) => 3,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ggc_core::Error> for CliError {
    fn from(e: ggc_core::Error) -> Self {
        match e {
            ggc_core::Error::Parse { .. } | ggc_core::Error::BadBlockTag(_) | ggc_core::Error::UnboundVariable(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<numeric::NumericError> for CliError {
    fn from(e: numeric::NumericError) -> Self {
        match e {
            numeric::NumericError::Core(c) => c.into(),
            numeric::NumericError::ShiftOutOfRange { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = String::new();
    let result = execute(&cli, &mut buf);
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &buf).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => out.write_all(buf.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    };
    match result.and(written) {
        Ok(()) => 0,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Failed(m) | CliError::Residual(m) => m,
            };
            let _ = writeln!(err, "error: {msg}");
            e.code()
        }
    }
}

fn read_or<T>(arg: &str, parse: impl FnOnce(&str) -> Result<T>, fallback: impl FnOnce(&str) -> Option<T>, what: &str) -> Result<T> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        return parse(&text);
    }
    fallback(arg).ok_or_else(|| CliError::Usage(format!("'{arg}' is neither a file nor a known {what}")))
}

pub fn load_algebra(arg: &str) -> Result<GradedLieAlgebra> {
    read_or(arg, |t| Ok(formats::parse_group(t)?), catalog::by_name, "group")
}

fn load_law(arg: &str) -> Result<GroupLaw> {
    let alg = load_algebra(arg)?;
    let report = alg.validate();
    if !report.passed() {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(CliError::Failed(format!("invalid algebra {}:\n{}", alg.name, lines.join("\n"))));
    }
    Ok(GroupLaw::bch(&alg)?)
}

pub fn load_tau(law: &GroupLaw, arg: &str) -> Result<QuantizingFunction> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        return Ok(formats::parse_tau(law, &text)?);
    }
    if arg == "mr" {
        let alg = law.algebra();
        let rep = if let Some(n) = alg.heisenberg_n() {
            MatrixRep::heisenberg(n)
        } else if alg.entries().is_empty() {
            MatrixRep::abelian(alg.dim())
        } else {
            return Err(CliError::Usage(format!("no built-in matrix representation for {}", alg.name)));
        };
        return Ok(mr_tau(law, &rep)?);
    }
    let kind = BuiltinTau::parse(arg).ok_or_else(|| CliError::Usage(format!("'{arg}' is neither a file nor a built-in quantizing function")))?;
    Ok(QuantizingFunction::builtin(law, kind))
}

fn basis(law: &GroupLaw, weight: u32, cap: u32) -> Result<CanonicalBasis> {
    if weight > cap {
        return Err(CliError::Failed(format!("weight {weight} exceeds the maximum {cap} (raise GGC_MAX_WEIGHT)")));
    }
    Ok(CanonicalBasis::build(&InvariantFields::new(law), weight)?)
}

fn direction(d: Direction) -> ChangeDirection {
    match d {
        Direction::ToKn => ChangeDirection::TauToKn,
        Direction::FromKn => ChangeDirection::KnToTau,
    }
}

fn execute(cli: &Cli, out: &mut String) -> Result<()> {
    use std::fmt::Write as _;
    let cap = cli.weight_cap;
    match &cli.command {
        Command::Group { action, group } => {
            let alg = load_algebra(group)?;
            let report = alg.validate();
            match action {
                GroupAction::Validate => {
                    if cli.json {
                        writeln!(out, "{}", formats::pretty(&formats::ValidationJson::new(&alg.name, &report))).ok();
                    } else if report.passed() {
                        writeln!(out, "{}: ok (dim {}, step {}, Q = {})", alg.name, alg.dim(), alg.step(), alg.homogeneous_dim()).ok();
                    } else {
                        for v in &report.violations {
                            writeln!(out, "{v}").ok();
                        }
                    }
                    if !report.passed() {
                        return Err(CliError::Failed(format!("{} violation(s) in {}", report.violations.len(), alg.name)));
                    }
                }
                GroupAction::Law => {
                    let law = load_law(group)?;
                    let r: Vec<String> = law.r().iter().map(ToString::to_string).collect();
                    if cli.json {
                        writeln!(out, "{}", formats::pretty(&formats::LawJson { name: alg.name.clone(), law: r })).ok();
                    } else {
                        for line in r {
                            writeln!(out, "{line}").ok();
                        }
                    }
                }
            }
        }
        Command::Tau { action, group, tau } => {
            let law = load_law(group)?;
            let t = load_tau(&law, tau)?;
            match action {
                TauAction::Builtin => {
                    writeln!(out, "{}", formats::tau_to_json(&t)).ok();
                }
                TauAction::Validate => {
                    let hp = t.validate_hp();
                    let sym = t.is_symmetric();
                    for (j, v) in hp.coords.iter().enumerate() {
                        let s = match v {
                            HpVerdict::Zero => "zero".to_string(),
                            HpVerdict::Valid { lead, rest } => format!("valid (C = {}, d = {})", fmt_rational(lead), rest),
                            HpVerdict::Invalid(why) => format!("invalid ({why})"),
                        };
                        writeln!(out, "c{}: {s}", j + 1).ok();
                    }
                    let mut line = format!("HP: {}; symmetric: {}", if hp.passed() { "ok" } else { "fail" }, if sym.symmetric { "yes" } else { "no" });
                    if let Some((j, r)) = &sym.witness {
                        write!(line, "; residual: {r} (coordinate {})", j + 1).ok();
                    }
                    writeln!(out, "{line}").ok();
                    if !hp.passed() {
                        return Err(CliError::Failed("quantizing function fails (HP)".into()));
                    }
                }
            }
        }
        Command::Coeffs { kind, group, tau, max_weight, direction: d } => {
            let law = load_law(group)?;
            let t = load_tau(&law, tau)?;
            let b = basis(&law, *max_weight, cap)?;
            let tables = match kind {
                ExpandKind::Change => vec![change_coeffs(&t, &b, direction(*d), *max_weight)?],
                ExpandKind::Adjoint => vec![adjoint_coeffs(&t, &b, *max_weight)?],
                ExpandKind::Compose => {
                    let (p1, p2) = composition_coeffs(&t, &b, *max_weight)?;
                    vec![p1, p2]
                }
            };
            let tables = formats::TablesJson { tables: tables.iter().map(TableJson::from_table).collect() };
            writeln!(out, "{}", formats::pretty(&tables)).ok();
        }
        Command::Expand { kind, group, tau, orders, direction: d } => {
            let law = load_law(group)?;
            let t = load_tau(&law, tau)?;
            let b = basis(&law, (*orders).max(1), cap)?;
            let e: Expansion = match kind {
                ExpandKind::Compose => compose_expansion(&t, &b, *orders)?,
                ExpandKind::Adjoint => adjoint_expansion(&t, &b, *orders)?,
                ExpandKind::Change => change_expansion(&t, &b, direction(*d), *orders)?,
            };
            if cli.json {
                writeln!(out, "{}", formats::pretty(&ExpansionJson::from_expansion(&e))).ok();
            } else {
                writeln!(out, "{e}").ok();
            }
        }
        Command::Poisson { group, tau } => {
            let law = load_law(group)?;
            let idx = poisson_bracket_spec(&law)?;
            let t = load_tau(&law, tau)?;
            let b = basis(&law, 2, cap)?;
            let layer: Vec<String> = idx.iter().map(|j| format!("X{}", j + 1)).collect();
            let verdict = poisson_check(&t, &b);
            if cli.json {
                let v = formats::PoissonJson {
                    group: law.algebra().name.clone(),
                    first_stratum: idx.iter().map(|j| j + 1).collect(),
                    factor: fmt_rational(&poisson_factor()),
                    pass: verdict.is_ok(),
                };
                writeln!(out, "{}", formats::pretty(&v)).ok();
            } else {
                writeln!(out, "first stratum: {}", layer.join(", ")).ok();
                writeln!(out, "omega_1 = {} sum_j [(X_j s1)(D_j s2) - (D_j s1)(X_j s2)]", fmt_rational(&poisson_factor())).ok();
                writeln!(out, "check: {}", if verdict.is_ok() { "ok" } else { "fail" }).ok();
            }
            verdict?;
        }
        Command::Numeric { check, opts } => {
            let grid = Grid::new(opts.grid, opts.period_pi * std::f64::consts::PI)?;
            let mut reports = match check {
                NumericCheck::AdjointCheck => {
                    let s = numeric::EuclidSymbol::parse(&opts.sigma)?;
                    let t = parse_rational(&opts.t).map_err(CliError::from)?;
                    let tf = num_traits::ToPrimitive::to_f64(&t).unwrap_or(f64::NAN);
                    let r = numeric::adjoint_check(&s, tf, &grid);
                    vec![ResidualReport::new("adjoint", &grid, r, 1e-10, numeric::Bound::Max).param("sigma", &opts.sigma).param("t", &opts.t)]
                }
                NumericCheck::MoyalCheck => {
                    let s1 = numeric::EuclidSymbol::parse(&opts.s1)?;
                    let s2 = numeric::EuclidSymbol::parse(&opts.s2)?;
                    let t = parse_rational(&opts.t).map_err(CliError::from)?;
                    let m = opts.orders.unwrap_or_else(|| numeric::terminating_order(s1.poly().expect("parsed"), s2.poly().expect("parsed")));
                    if m > cap {
                        return Err(CliError::Failed(format!("order {m} exceeds the maximum weight {cap}")));
                    }
                    vec![numeric::moyal_exactness_check(&s1, &s2, &grid, m, &t)?.param("s1", &opts.s1).param("s2", &opts.s2)]
                }
                NumericCheck::RepCheck => {
                    let mut v = numeric::rep_checks(&grid, opts.lambda, &numeric::SAMPLES)?;
                    v.push(numeric::sublaplacian_symbol_check(&grid, opts.lambda)?);
                    v
                }
                NumericCheck::MetaplecticCheck => {
                    let kind = match opts.kind {
                        MetaKind::Dilation => MetaplecticKind::Dilation(opts.param),
                        MetaKind::Chirp => MetaplecticKind::Chirp(opts.param),
                        MetaKind::J => MetaplecticKind::J,
                    };
                    vec![numeric::metaplectic_check(&grid, opts.lambda, kind)?]
                }
            };
            if let Some(tol) = opts.tol {
                if tol.is_nan() || tol <= 0.0 {
                    return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
                }
                reports.iter_mut().for_each(|r| r.tolerance = tol);
            }
            if cli.json {
                writeln!(out, "{}", formats::reports_to_json(&reports)).ok();
            } else {
                for r in &reports {
                    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let cmp = if r.bound == numeric::Bound::Max { "<=" } else { ">=" };
                    write!(
                        out,
                        "{}: {} residual {} {cmp} {} [N={}; {}]",
                        r.check,
                        if r.pass() { "pass" } else { "FAIL" },
                        formats::fmt_float(r.residual),
                        formats::fmt_float(r.tolerance),
                        r.grid,
                        params.join("; ")
                    )
                    .ok();
                    if !r.advisories.is_empty() {
                        write!(out, " advisories: {}", r.advisories.join(",")).ok();
                    }
                    writeln!(out).ok();
                }
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.check.as_str()).collect();
            if !failed.is_empty() {
                return Err(CliError::Residual(format!("residual above tolerance: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}
