//! Quantizing functions `τ: G → G`, their validation, the coefficient tables
//! of the change-of-quantization, adjoint and composition expansions, and
//! linear automorphisms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{dilate, GroupLaw};
use crate::invariant::CanonicalBasis;
use crate::linalg;
use crate::poly::{
    blocks, factorial, monomials_of_weight, monomials_up_to_weight, rat, Block, Homogeneity, Monomial, MultiIndex,
    Polynomial, Rational, Var,
};

/// `τ` as `n` coordinate polynomials in the `x` block.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizingFunction {
    law: GroupLaw,
    c: Vec<Polynomial>,
}

/// Why a coordinate fails (HP).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HpFailure {
    NonHomogeneous,
    WrongWeight,
    ZeroLeadingCoefficient,
    DependsOnLaterVars,
}

impl fmt::Display for HpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HpFailure::NonHomogeneous => "non-homogeneous",
            HpFailure::WrongWeight => "wrong-weight",
            HpFailure::ZeroLeadingCoefficient => "zero-leading-coefficient",
            HpFailure::DependsOnLaterVars => "depends-on-later-vars",
        })
    }
}

/// Per-coordinate (HP) verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum HpVerdict {
    Zero,
    /// `c_j = lead · x_j + rest(x_1, …, x_{j−1})`
    Valid { lead: Rational, rest: Polynomial },
    Invalid(HpFailure),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HpReport {
    pub coords: Vec<HpVerdict>,
}

impl HpReport {
    pub fn passed(&self) -> bool {
        self.coords.iter().all(|v| !matches!(v, HpVerdict::Invalid(_)))
    }
}

/// Outcome of the symmetry test `τ(x) = τ(x⁻¹)x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    /// First coordinate (0-based) with a nonzero residual, and the residual.
    pub witness: Option<(usize, Polynomial)>,
}

/// Built-in quantizing functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinTau {
    /// `τ = e` (Kohn-Nirenberg)
    Kn,
    /// `τ(x) = x`
    Right,
    /// `τ(x) = x/2`, i.e. `exp(½ log x)`
    HalfLog,
}

impl BuiltinTau {
    pub fn parse(s: &str) -> Option<BuiltinTau> {
        match s {
            "kn" => Some(BuiltinTau::Kn),
            "right" => Some(BuiltinTau::Right),
            "half_log" | "half-log" => Some(BuiltinTau::HalfLog),
            _ => None,
        }
    }
}

impl QuantizingFunction {
    pub fn new(law: &GroupLaw, c: Vec<Polynomial>) -> Result<Self> {
        let n = law.dim();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        for p in &c {
            for v in p.vars() {
                if v.block != blocks::X || v.index == 0 || v.index as usize > n {
                    return Err(Error::UnboundVariable(format!("{v}")));
                }
            }
        }
        Ok(QuantizingFunction { law: law.clone(), c })
    }

    pub fn builtin(law: &GroupLaw, kind: BuiltinTau) -> Self {
        let n = law.dim();
        let x = Polynomial::coords(blocks::X, n);
        let c = match kind {
            BuiltinTau::Kn => vec![Polynomial::zero(); n],
            BuiltinTau::Right => x,
            BuiltinTau::HalfLog => x.iter().map(|p| p.scale(&rat(1, 2))).collect(),
        };
        let tau = QuantizingFunction { law: law.clone(), c };
        debug_assert!(kind != BuiltinTau::HalfLog || tau.is_symmetric().symmetric);
        tau
    }

    /// `(x/2, x_{2n+1}/2 + Σ c_{jk} x_j x_k)` on `H_n`; `c` is `2n × 2n`.
    pub fn heisenberg_family(law: &GroupLaw, c: &[Vec<Rational>]) -> Result<Self> {
        let n = law.algebra().heisenberg_n().ok_or_else(|| Error::KindUnsupported("family needs a Heisenberg group".into()))?;
        if c.len() != 2 * n || c.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: c.len() });
        }
        let x = Polynomial::coords(blocks::X, 2 * n + 1);
        let mut coords: Vec<Polynomial> = x.iter().map(|p| p.scale(&rat(1, 2))).collect();
        for (j, row) in c.iter().enumerate() {
            for (k, cjk) in row.iter().enumerate() {
                coords[2 * n] += (&x[j] * &x[k]).scale(cjk);
            }
        }
        QuantizingFunction::new(law, coords)
    }

    pub fn law(&self) -> &GroupLaw {
        &self.law
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// `τ(p)` for a point given by polynomials.
    pub fn apply(&self, p: &[Polynomial]) -> Vec<Polynomial> {
        self.c.iter().map(|cj| cj.substitute_block(blocks::X, p)).collect()
    }

    /// `τ` with its argument in another block.
    pub fn in_block(&self, block: Block) -> Vec<Polynomial> {
        self.c.iter().map(|cj| cj.rename_block(blocks::X, block)).collect()
    }

    pub fn validate_hp(&self) -> HpReport {
        let w = self.law.weights();
        let coords = self
            .c
            .iter()
            .enumerate()
            .map(|(j, cj)| {
                if cj.is_zero() {
                    return HpVerdict::Zero;
                }
                match cj.homogeneous_weight(w) {
                    Homogeneity::NonHomogeneous => return HpVerdict::Invalid(HpFailure::NonHomogeneous),
                    Homogeneity::Weight(v) if v != w[j] => return HpVerdict::Invalid(HpFailure::WrongWeight),
                    _ => {}
                }
                if cj.vars().iter().any(|v| v.index as usize > j + 1) {
                    return HpVerdict::Invalid(HpFailure::DependsOnLaterVars);
                }
                let xj = Monomial::var(Var::new(blocks::X, j as u32 + 1));
                let lead = cj.coeff(&xj);
                if lead.is_zero() {
                    return HpVerdict::Invalid(HpFailure::ZeroLeadingCoefficient);
                }
                let rest = cj - &Polynomial::term(xj, lead.clone());
                HpVerdict::Valid { lead, rest }
            })
            .collect();
        HpReport { coords }
    }

    fn require_hp(&self) -> Result<()> {
        let report = self.validate_hp();
        match report.coords.iter().enumerate().find_map(|(j, v)| match v {
            HpVerdict::Invalid(why) => Some((j, *why)),
            _ => None,
        }) {
            Some((j, why)) => Err(Error::NotHp(format!("coordinate {}: {why}", j + 1))),
            None => Ok(()),
        }
    }

    /// Checks `τ(x) = R(τ(−x), x)` coordinate-wise; the witness is `R(τ(−x), x) − τ(x)`.
    pub fn is_symmetric(&self) -> SymmetryReport {
        let n = self.dim();
        let x = Polynomial::coords(blocks::X, n);
        let rhs = self.law.multiply(&self.apply(&self.law.inverse(&x)), &x);
        let witness = self.c.iter().zip(&rhs).enumerate().map(|(j, (l, r))| (j, r - l)).find(|(_, d)| !d.is_zero());
        SymmetryReport { symmetric: witness.is_none(), witness }
    }

    /// `T = τ(x)·τ(y)·τ(x·y)⁻¹`, so that `τ(x)τ(y) = T·τ(x·y)`.
    pub fn product_correction(&self) -> Result<Vec<Polynomial>> {
        self.require_hp()?;
        let n = self.dim();
        let x = Polynomial::coords(blocks::X, n);
        let y = Polynomial::coords(blocks::Y, n);
        let txy = self.apply(&self.law.multiply(&x, &y));
        let t = self.law.multiply_all(&[&self.in_block(blocks::X), &self.in_block(blocks::Y), &self.law.inverse(&txy)]);
        for (j, tj) in t.iter().enumerate() {
            for (m, _) in tj.terms() {
                if !(m.has_block(blocks::X) && m.has_block(blocks::Y)) {
                    return Err(Error::StructureViolation(format!("T_{} has unmixed monomial {m}", j + 1)));
                }
                if m.factors().iter().any(|(v, _)| v.index as usize > j + 1) {
                    return Err(Error::StructureViolation(format!("T_{} depends on later coordinates", j + 1)));
                }
            }
        }
        Ok(t)
    }

    /// `p_1(y,z) = τ(y)τ(z⁻¹y)⁻¹` and `p_2(y,z) = τ(y)y⁻¹zτ(z)⁻¹`.
    pub fn p_maps(&self) -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
        self.require_hp()?;
        let law = &self.law;
        let n = self.dim();
        let y = Polynomial::coords(blocks::Y, n);
        let z = Polynomial::coords(blocks::Z, n);
        let ty = self.in_block(blocks::Y);
        let tz = self.in_block(blocks::Z);
        let zinv_y = law.multiply(&law.inverse(&z), &y);
        let p1 = law.multiply(&ty, &law.inverse(&self.apply(&zinv_y)));
        let p2 = law.multiply_all(&[&ty, &law.inverse(&y), &z, &law.inverse(&tz)]);
        let w = law.weights();
        for (k, p) in [&p1, &p2].into_iter().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if !pj.homogeneous_weight_in(w, &[blocks::Y, blocks::Z]).allows(w[j]) {
                    return Err(Error::StructureViolation(format!("p_{} coordinate {} not homogeneous", k + 1, j + 1)));
                }
            }
        }
        Ok((p1, p2))
    }

    /// `τ(y)y⁻¹τ(y⁻¹)⁻¹`, constantly `e` exactly when `τ` is symmetric.
    pub fn adjoint_argument(&self) -> Vec<Polynomial> {
        let law = &self.law;
        let y = Polynomial::coords(blocks::Y, self.dim());
        let yinv = law.inverse(&y);
        law.multiply_all(&[&self.in_block(blocks::Y), &yinv, &law.inverse(&self.apply(&yinv))])
    }
}

/// A faithful nilpotent matrix representation `X_j ↦ E_j`.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub size: usize,
    pub gens: Vec<Vec<Vec<Rational>>>,
}

type PolyMatrix = Vec<Vec<Polynomial>>;

fn unit_matrix(d: usize, i: usize, j: usize) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); d]; d];
    m[i][j] = Rational::one();
    m
}

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let d = a.len();
    let mut out = vec![vec![Polynomial::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn pm_is_zero(a: &PolyMatrix) -> bool {
    a.iter().all(|r| r.iter().all(Polynomial::is_zero))
}

fn rm_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

impl MatrixRep {
    /// `X_j ↦ E_{1,j+1}`, `X_{n+j} ↦ E_{j+1,n+2}`, `X_{2n+1} ↦ E_{1,n+2}`.
    pub fn heisenberg(n: usize) -> Self {
        let d = n + 2;
        let mut gens = Vec::new();
        for j in 0..n {
            gens.push(unit_matrix(d, 0, j + 1));
        }
        for j in 0..n {
            gens.push(unit_matrix(d, j + 1, n + 1));
        }
        gens.push(unit_matrix(d, 0, n + 1));
        MatrixRep { size: d, gens }
    }

    /// `X_j ↦ E_{1,j+1}` on `R^n`.
    pub fn abelian(n: usize) -> Self {
        MatrixRep { size: n + 1, gens: (0..n).map(|j| unit_matrix(n + 1, 0, j + 1)).collect() }
    }

    /// Checks `[E_i, E_j] = Σ c_ij^k E_k` and linear independence.
    pub fn check(&self, law: &GroupLaw) -> Result<()> {
        let alg = law.algebra();
        let n = alg.dim();
        if self.gens.len() != n {
            return Err(Error::RepNotFaithful(format!("{} generators for dimension {n}", self.gens.len())));
        }
        let flat: Vec<Vec<Rational>> = self.gens.iter().map(|g| g.iter().flatten().cloned().collect()).collect();
        if linalg::rank(&flat) != n {
            return Err(Error::RepNotFaithful("generators are linearly dependent".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let ab = rm_mul(&self.gens[i], &self.gens[j]);
                let ba = rm_mul(&self.gens[j], &self.gens[i]);
                for r in 0..self.size {
                    for s in 0..self.size {
                        let lhs = &ab[r][s] - &ba[r][s];
                        let rhs: Rational = (0..n).map(|k| alg.c(i, j, k) * &self.gens[k][r][s]).sum();
                        if lhs != rhs {
                            return Err(Error::RepNotFaithful(format!("bracket [{}, {}] not preserved", i + 1, j + 1)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `A(x) = Σ x_j E_j`.
    fn image(&self, x: &[Polynomial]) -> PolyMatrix {
        let d = self.size;
        let mut a = vec![vec![Polynomial::zero(); d]; d];
        for (xj, g) in x.iter().zip(&self.gens) {
            for i in 0..d {
                for k in 0..d {
                    if !g[i][k].is_zero() {
                        a[i][k] += xj.scale(&g[i][k]);
                    }
                }
            }
        }
        a
    }

    /// Coordinates `c` with `L = Σ c_j E_j`.
    fn coordinates(&self, l: &PolyMatrix) -> Result<Vec<Polynomial>> {
        let n = self.gens.len();
        let d = self.size;
        let mut monos: BTreeMap<Monomial, ()> = BTreeMap::new();
        for row in l {
            for p in row {
                for (m, _) in p.terms() {
                    monos.insert(m.clone(), ());
                }
            }
        }
        let a: Vec<Vec<Rational>> =
            (0..d * d).map(|idx| (0..n).map(|j| self.gens[j][idx / d][idx % d].clone()).collect()).collect();
        let mut out = vec![Polynomial::zero(); n];
        for m in monos.keys() {
            let b: Vec<Rational> = (0..d * d).map(|idx| l[idx / d][idx % d].coeff(m)).collect();
            let c = linalg::solve(&a, &b).map_err(|_| Error::RepNotFaithful("logarithm leaves the image".into()))?;
            for (o, cj) in out.iter_mut().zip(c) {
                o.add_term(m.clone(), cj);
            }
        }
        Ok(out)
    }
}

/// `τ(x) = log ∫₀¹ exp(s A(x)) ds` read off in the representation.
pub fn mr_tau(law: &GroupLaw, rep: &MatrixRep) -> Result<QuantizingFunction> {
    rep.check(law)?;
    let d = rep.size;
    let a = rep.image(&Polynomial::coords(blocks::X, law.dim()));
    let ident: PolyMatrix = (0..d).map(|i| (0..d).map(|j| if i == j { Polynomial::one() } else { Polynomial::zero() }).collect()).collect();
    // B − I = Σ_{k>=1} A^k/(k+1)!
    let mut b_minus = vec![vec![Polynomial::zero(); d]; d];
    let mut pow = ident.clone();
    for k in 1..=d as u32 {
        pow = pm_mul(&pow, &a);
        if pm_is_zero(&pow) {
            break;
        }
        let f = Rational::one() / factorial(k + 1);
        for i in 0..d {
            for j in 0..d {
                b_minus[i][j] += pow[i][j].scale(&f);
            }
        }
    }
    // log B = Σ_{k>=1} (−1)^{k+1} (B − I)^k / k
    let mut log = vec![vec![Polynomial::zero(); d]; d];
    let mut pow = ident;
    for k in 1..=d as i64 {
        pow = pm_mul(&pow, &b_minus);
        if pm_is_zero(&pow) {
            break;
        }
        let f = rat(if k % 2 == 1 { 1 } else { -1 }, k);
        for i in 0..d {
            for j in 0..d {
                log[i][j] += pow[i][j].scale(&f);
            }
        }
    }
    QuantizingFunction::new(law, rep.coordinates(&log)?)
}

/// Which coefficient family a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableKind {
    ChangeToKn,
    ChangeFromKn,
    Adjoint,
    ComposeP1,
    ComposeP2,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::ChangeToKn => "change_to_kn",
            TableKind::ChangeFromKn => "change_from_kn",
            TableKind::Adjoint => "adjoint",
            TableKind::ComposeP1 => "compose_p1",
            TableKind::ComposeP2 => "compose_p2",
        }
    }

    pub fn parse(s: &str) -> Option<TableKind> {
        [TableKind::ChangeToKn, TableKind::ChangeFromKn, TableKind::Adjoint, TableKind::ComposeP1, TableKind::ComposeP2]
            .into_iter()
            .find(|k| k.as_str() == s)
    }

    /// Number of indices in a split.
    pub fn split_len(self) -> usize {
        match self {
            TableKind::ComposeP1 | TableKind::ComposeP2 => 2,
            _ => 1,
        }
    }
}

/// Sparse table `(α, split) ↦ c`.
///
/// One-block tables have split `[α']`; the composition tables have split
/// `[α1, α2]` with `α1` on `z` and `α2` on `z⁻¹y` for `p_1`, and
/// `[β1, β2]` with `β1` on `z⁻¹y` and `β2` on `z` for `p_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub kind: TableKind,
    pub max_weight: u32,
    pub entries: BTreeMap<(MultiIndex, Vec<MultiIndex>), Rational>,
}

impl CoefficientTable {
    pub fn new(kind: TableKind, max_weight: u32) -> Self {
        CoefficientTable { kind, max_weight, entries: BTreeMap::new() }
    }

    pub fn get(&self, alpha: &MultiIndex, split: &[MultiIndex]) -> Rational {
        self.entries.get(&(alpha.clone(), split.to_vec())).cloned().unwrap_or_default()
    }

    /// Nonzero entries for one `α`.
    pub fn row(&self, alpha: &MultiIndex) -> impl Iterator<Item = (&Vec<MultiIndex>, &Rational)> + '_ {
        let a = alpha.clone();
        self.entries.iter().filter(move |((x, _), _)| *x == a).map(|((_, s), c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert_row(&mut self, alpha: &MultiIndex, row: impl IntoIterator<Item = (Vec<MultiIndex>, Rational)>) {
        for (s, c) in row {
            if !c.is_zero() {
                self.entries.insert((alpha.clone(), s), c);
            }
        }
    }
}

/// Basis layout for [`solve_in_qtilde_basis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// `{q̃_{α'}(y)}`
    OneBlock,
    /// `y = z·w`, basis `q̃_{α1}(z) q̃_{α2}(w)`
    P1,
    /// `y = z·w`, basis `q̃_{β1}(w) q̃_{β2}(z)`
    P2,
}

/// Expands a polynomial homogeneous of weight `m` in the prescribed `q̃` basis,
/// then re-multiplies and checks the residual is exactly zero.
pub fn solve_in_qtilde_basis(
    law: &GroupLaw,
    basis: &CanonicalBasis,
    poly: &Polynomial,
    layout: Layout,
    m: u32,
) -> Result<Vec<(Vec<MultiIndex>, Rational)>> {
    let w = basis.weights().to_vec();
    if m > basis.max_weight() {
        return Err(Error::WeightTooLarge { requested: m, max: basis.max_weight() });
    }
    let (target, keys, polys) = match layout {
        Layout::OneBlock => {
            let idx = monomials_of_weight(&w, m);
            let polys = idx.iter().map(|g| basis.qt_in(g, blocks::Y)).collect::<Result<Vec<_>>>()?;
            (poly.clone(), idx.into_iter().map(|g| vec![g]).collect::<Vec<_>>(), polys)
        }
        Layout::P1 | Layout::P2 => {
            let n = law.dim();
            let zw = law.multiply(&Polynomial::coords(blocks::Z, n), &Polynomial::coords(blocks::W, n));
            let target = poly.substitute_block(blocks::Y, &zw);
            let (b1, b2) = if layout == Layout::P1 { (blocks::Z, blocks::W) } else { (blocks::W, blocks::Z) };
            let mut keys = Vec::new();
            let mut polys = Vec::new();
            for m1 in 0..=m {
                for a1 in monomials_of_weight(&w, m1) {
                    let q1 = basis.qt_in(&a1, b1)?;
                    for a2 in monomials_of_weight(&w, m - m1) {
                        polys.push(&q1 * &basis.qt_in(&a2, b2)?);
                        keys.push(vec![a1.clone(), a2]);
                    }
                }
            }
            (target, keys, polys)
        }
    };
    let c = linalg::express_in_span(&target, &polys)?;
    let mut back = Polynomial::zero();
    for (p, ci) in polys.iter().zip(&c) {
        back += p.scale(ci);
    }
    if back != target {
        return Err(Error::BasisDeficient("nonzero reconstruction residual".into()));
    }
    Ok(keys.into_iter().zip(c).filter(|(_, c)| !c.is_zero()).collect())
}

/// Direction of the change-of-quantization table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeDirection {
    /// `q_α(τ(y)) = Σ c q̃_{α'}(y)`
    TauToKn,
    /// `q_β(τ(y)⁻¹) = Σ c q̃_{β'}(y)`
    KnToTau,
}

fn one_block_table(
    tau: &QuantizingFunction,
    basis: &CanonicalBasis,
    kind: TableKind,
    arg: &[Polynomial],
    m_max: u32,
) -> Result<CoefficientTable> {
    tau.require_hp()?;
    let mut table = CoefficientTable::new(kind, m_max);
    for alpha in monomials_up_to_weight(basis.weights(), m_max) {
        let target = basis.q(&alpha)?.substitute_block(blocks::X, arg);
        let row = solve_in_qtilde_basis(tau.law(), basis, &target, Layout::OneBlock, alpha.weight(basis.weights()))?;
        table.insert_row(&alpha, row);
    }
    Ok(table)
}

pub fn change_coeffs(tau: &QuantizingFunction, basis: &CanonicalBasis, dir: ChangeDirection, m: u32) -> Result<CoefficientTable> {
    let ty = tau.in_block(blocks::Y);
    match dir {
        ChangeDirection::TauToKn => one_block_table(tau, basis, TableKind::ChangeToKn, &ty, m),
        ChangeDirection::KnToTau => one_block_table(tau, basis, TableKind::ChangeFromKn, &tau.law().inverse(&ty), m),
    }
}

pub fn adjoint_coeffs(tau: &QuantizingFunction, basis: &CanonicalBasis, m: u32) -> Result<CoefficientTable> {
    one_block_table(tau, basis, TableKind::Adjoint, &tau.adjoint_argument(), m)
}

/// Tables for `q_α(p_1)` and `q_β(p_2)`, `[α], [β] <= m`.
pub fn composition_coeffs(tau: &QuantizingFunction, basis: &CanonicalBasis, m: u32) -> Result<(CoefficientTable, CoefficientTable)> {
    let (p1, p2) = tau.p_maps()?;
    let mut t1 = CoefficientTable::new(TableKind::ComposeP1, m);
    let mut t2 = CoefficientTable::new(TableKind::ComposeP2, m);
    for alpha in monomials_up_to_weight(basis.weights(), m) {
        let wa = alpha.weight(basis.weights());
        let q = basis.q(&alpha)?;
        t1.insert_row(&alpha, solve_in_qtilde_basis(tau.law(), basis, &q.substitute_block(blocks::X, &p1), Layout::P1, wa)?);
        t2.insert_row(&alpha, solve_in_qtilde_basis(tau.law(), basis, &q.substitute_block(blocks::X, &p2), Layout::P2, wa)?);
    }
    Ok((t1, t2))
}

/// A polynomial automorphism `φ` of the group, validated on construction.
/// Coordinates are polynomials in `x`, optionally with parameter blocks.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub name: String,
    law: GroupLaw,
    map: Vec<Polynomial>,
}

impl Automorphism {
    /// Checks `φ(x·y) = φ(x)·φ(y)` as an exact identity.
    pub fn new(law: &GroupLaw, name: &str, map: Vec<Polynomial>) -> Result<Self> {
        let n = law.dim();
        if map.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: map.len() });
        }
        let x = Polynomial::coords(blocks::X, n);
        let y = Polynomial::coords(blocks::Y, n);
        let phi = |p: &[Polynomial]| -> Vec<Polynomial> { map.iter().map(|m| m.substitute_block(blocks::X, p)).collect() };
        let lhs = phi(&law.multiply(&x, &y));
        let rhs = law.multiply(&phi(&x), &phi(&y));
        if lhs != rhs {
            return Err(Error::NotAutomorphism(format!("{name} is not a homomorphism")));
        }
        Ok(Automorphism { name: name.into(), law: law.clone(), map })
    }

    /// `x ↦ y·x·y⁻¹` for a point `y` (numeric or symbolic).
    pub fn conj(law: &GroupLaw, y: &[Polynomial]) -> Result<Self> {
        let x = Polynomial::coords(blocks::X, law.dim());
        let map = law.multiply_all(&[y, &x, &law.inverse(y)]);
        Automorphism::new(law, "conj", map)
    }

    /// `D_r`, `r` symbolic or constant.
    pub fn dilation(law: &GroupLaw, r: &Polynomial) -> Result<Self> {
        let map = dilate(law.weights(), r, &Polynomial::coords(blocks::X, law.dim()));
        Automorphism::new(law, "dilation", map)
    }

    /// `Θ(x', x'', t) = (x', −x'', −t)` on `H_n`.
    pub fn theta(law: &GroupLaw) -> Result<Self> {
        let n = heis(law)?;
        let x = Polynomial::coords(blocks::X, 2 * n + 1);
        let map = x.iter().enumerate().map(|(j, p)| if j < n { p.clone() } else { -p }).collect();
        Automorphism::new(law, "theta", map)
    }

    /// `S̃ = diag(S, 1)` on `H_n`, `S` a `2n × 2n` rational matrix.
    pub fn symplectic(law: &GroupLaw, name: &str, s: &[Vec<Rational>]) -> Result<Self> {
        let n = heis(law)?;
        if s.len() != 2 * n || s.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: s.len() });
        }
        let x = Polynomial::coords(blocks::X, 2 * n + 1);
        let mut map: Vec<Polynomial> = s
            .iter()
            .map(|row| {
                let mut p = Polynomial::zero();
                for (c, xk) in row.iter().zip(&x) {
                    p += xk.scale(c);
                }
                p
            })
            .collect();
        map.push(x[2 * n].clone());
        Automorphism::new(law, name, map)
    }

    /// `diag(A, A^{-T})`.
    pub fn symplectic_a(law: &GroupLaw, a: &[Vec<Rational>]) -> Result<Self> {
        let n = heis(law)?;
        let ident: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        let ainv = linalg::solve_multi(a, &ident).map_err(|_| Error::NotAutomorphism("A is singular".into()))?;
        let mut s = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                s[i][j] = a[i][j].clone();
                s[n + i][n + j] = ainv[j][i].clone();
            }
        }
        Automorphism::symplectic(law, "symplectic_a", &s)
    }

    /// `[[I, 0], [C, I]]`, `C` symmetric.
    pub fn symplectic_c(law: &GroupLaw, c: &[Vec<Rational>]) -> Result<Self> {
        let n = heis(law)?;
        let mut s = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        for i in 0..n {
            for j in 0..n {
                s[n + i][j] = c[i][j].clone();
            }
        }
        Automorphism::symplectic(law, "symplectic_c", &s)
    }

    /// `J = [[0, I], [−I, 0]]`.
    pub fn symplectic_j(law: &GroupLaw) -> Result<Self> {
        let n = heis(law)?;
        let mut s = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            s[i][n + i] = Rational::one();
            s[n + i][i] = -Rational::one();
        }
        Automorphism::symplectic(law, "symplectic_j", &s)
    }

    pub fn map(&self) -> &[Polynomial] {
        &self.map
    }

    pub fn apply(&self, p: &[Polynomial]) -> Vec<Polynomial> {
        self.map.iter().map(|m| m.substitute_block(blocks::X, p)).collect()
    }

    /// `φ(τ(x)) = τ(φ(x))`.
    pub fn commutes_with(&self, tau: &QuantizingFunction) -> bool {
        self.apply(tau.coords()) == tau.apply(&self.map)
    }

    /// `φ(τ(y⁻¹x)) = τ(φ(y)⁻¹φ(x))`.
    pub fn respects_kernel_argument(&self, tau: &QuantizingFunction) -> bool {
        let law = &self.law;
        let n = law.dim();
        let x = Polynomial::coords(blocks::X, n);
        let y = Polynomial::coords(blocks::Y, n);
        let lhs = self.apply(&tau.apply(&law.multiply(&law.inverse(&y), &x)));
        let phi_y: Vec<Polynomial> = self.map.iter().map(|m| m.rename_block(blocks::X, blocks::Y)).collect();
        let rhs = tau.apply(&law.multiply(&law.inverse(&phi_y), &self.map));
        lhs == rhs
    }
}

fn heis(law: &GroupLaw) -> Result<usize> {
    law.algebra().heisenberg_n().ok_or_else(|| Error::KindUnsupported("automorphism needs a Heisenberg group".into()))
}

/// First-stratum indices (0-based) defining the homogeneous Poisson bracket
/// `(−i) Σ_{[α]=1} [(X^α σ1)(Δ^α σ2) − (Δ^α σ1)(X^α σ2)]`.
pub fn poisson_bracket_spec(law: &GroupLaw) -> Result<Vec<usize>> {
    let alg = law.algebra();
    if !alg.is_stratified() {
        return Err(Error::NotStratified(alg.name.clone()));
    }
    Ok((0..alg.dim()).filter(|&j| alg.weights()[j] == 1).collect())
}
