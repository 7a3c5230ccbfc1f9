//! Invariant vector fields as polynomial-coefficient differential operators,
//! the canonical polynomials `q_α`, conversion polynomials between the
//! derivative families `X^α`, `X̃^α`, `∂^α`, and homogeneous Taylor polynomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::GroupLaw;
use crate::linalg;
use crate::poly::{
    block_bindings, blocks, monomials_of_weight, monomials_up_to_weight, Block, Homogeneity, Monomial, MultiIndex,
    Polynomial, Rational, Var,
};

/// Default largest weight of the canonical basis.
pub const DEFAULT_MAX_WEIGHT: u32 = 6;

/// `Σ_β p_β ∂^β` acting on one block, coefficients on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    n: usize,
    block: Block,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp { n, block: blocks::X, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        DiffOp::partial(n, &MultiIndex::zero(n))
    }

    /// `∂^α`.
    pub fn partial(n: usize, alpha: &MultiIndex) -> Self {
        let mut op = DiffOp::zero(n);
        op.add_term(alpha.clone(), Polynomial::one());
        op
    }

    /// Operator on another block.
    pub fn on_block(mut self, block: Block) -> Self {
        self.block = block;
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn block(&self) -> Block {
        self.block
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> Polynomial {
        self.terms.get(beta).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `|β|` present.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::abs).max()
    }

    pub fn add_term(&mut self, beta: MultiIndex, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(beta.clone()).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&beta);
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), -p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp { n: self.n, block: self.block, terms: BTreeMap::new() };
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(c));
        }
        out
    }

    /// `p · self`.
    pub fn premul(&self, p: &Polynomial) -> DiffOp {
        let mut out = DiffOp { n: self.n, block: self.block, terms: BTreeMap::new() };
        for (b, c) in &self.terms {
            out.add_term(b.clone(), p * c);
        }
        out
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (b, c) in &self.terms {
            let d = p.derivative_index(self.block, b);
            if !d.is_zero() {
                out += c * &d;
            }
        }
        out
    }

    /// `self ∘ other` in normal form (Leibniz rule).
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp { n: self.n, block: self.block, terms: BTreeMap::new() };
        for (beta, a) in &self.terms {
            let subs = beta.sub_indices();
            for (gamma, b) in &other.terms {
                for delta in &subs {
                    let db = b.derivative_index(self.block, delta);
                    if db.is_zero() {
                        continue;
                    }
                    let rest = beta.checked_sub(delta).expect("sub-index");
                    let coeff = (a * &db).scale(&beta.binomial(delta));
                    out.add_term(rest.add(gamma), coeff);
                }
            }
        }
        out
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        self.compose(other).sub(&other.compose(self))
    }

    /// Homogeneous degree `d` with every term `p_β ∂^β` of weight `[β] − wt(p_β) = d`.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<i64> {
        let mut found = None;
        for (b, p) in &self.terms {
            let Homogeneity::Weight(wp) = p.homogeneous_weight_in(weights, &[self.block]) else {
                return None;
            };
            let d = b.weight(weights) as i64 - wp as i64;
            match found {
                None => found = Some(d),
                Some(f) if f != d => return None,
                _ => {}
            }
        }
        found
    }
}

/// Which invariant frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// Left-invariant `X_j`.
    Left,
    /// Right-invariant `X̃_j`.
    Right,
}

/// `X_j = Σ_k ∂R_k(x,y)/∂y_j|_{y=0} ∂_{x_k}`, `j` 0-based.
pub fn left_vf(law: &GroupLaw, j: usize) -> DiffOp {
    let n = law.dim();
    let mut op = DiffOp::zero(n);
    for (k, rk) in law.r().iter().enumerate() {
        let c = rk.derivative(Var::new(blocks::Y, j as u32 + 1)).at_zero(blocks::Y);
        op.add_term(MultiIndex::unit(n, k), c);
    }
    op
}

/// `X̃_j`, from `R_k(y, x)`.
pub fn right_vf(law: &GroupLaw, j: usize) -> DiffOp {
    let n = law.dim();
    let mut op = DiffOp::zero(n);
    for (k, rk) in law.r().iter().enumerate() {
        let c = rk.derivative(Var::new(blocks::X, j as u32 + 1)).at_zero(blocks::X).rename_block(blocks::Y, blocks::X);
        op.add_term(MultiIndex::unit(n, k), c);
    }
    op
}

/// Both invariant frames of a group law.
#[derive(Clone, Debug)]
pub struct InvariantFields {
    law: GroupLaw,
    left: Vec<DiffOp>,
    right: Vec<DiffOp>,
}

impl InvariantFields {
    pub fn new(law: &GroupLaw) -> Self {
        let n = law.dim();
        InvariantFields {
            law: law.clone(),
            left: (0..n).map(|j| left_vf(law, j)).collect(),
            right: (0..n).map(|j| right_vf(law, j)).collect(),
        }
    }

    pub fn law(&self) -> &GroupLaw {
        &self.law
    }

    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn weights(&self) -> &[u32] {
        self.law.weights()
    }

    pub fn field(&self, side: Side, j: usize) -> &DiffOp {
        match side {
            Side::Left => &self.left[j],
            Side::Right => &self.right[j],
        }
    }

    /// `X^α p = X_1^{α_1}(⋯(X_n^{α_n} p))`, without building the operator.
    pub fn apply_power(&self, side: Side, alpha: &MultiIndex, p: &Polynomial) -> Polynomial {
        let mut out = p.clone();
        for j in (0..self.dim()).rev() {
            for _ in 0..alpha.0[j] {
                if out.is_zero() {
                    return out;
                }
                out = self.field(side, j).apply(&out);
            }
        }
        out
    }

    /// `X^α = X_1^{α_1} ∘ ⋯ ∘ X_n^{α_n}` in normal form.
    pub fn power(&self, side: Side, alpha: &MultiIndex) -> DiffOp {
        let mut acc = DiffOp::identity(self.dim());
        for j in 0..self.dim() {
            for _ in 0..alpha.0[j] {
                acc = acc.compose(self.field(side, j));
            }
        }
        acc
    }

    /// `(X_j p)∘L_a − X_j(p∘L_a)` for the symbolic left translation
    /// `L_a(x) = a·x` (block `a`). Zero for a left-invariant field.
    pub fn left_invariance_defect(&self, j: usize, p: &Polynomial) -> Polynomial {
        let n = self.dim();
        let a = Polynomial::coords(blocks::A, n);
        let x = Polynomial::coords(blocks::X, n);
        let ax = self.law.multiply(&a, &x);
        let translate = |q: &Polynomial| q.substitute_block(blocks::X, &ax);
        &translate(&self.left[j].apply(p)) - &self.left[j].apply(&translate(p))
    }
}

/// The canonical polynomials `q_α`, `[α] <= max_weight`, dual to `X^β` at `e`.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    weights: Vec<u32>,
    max_weight: u32,
    q: BTreeMap<MultiIndex, Polynomial>,
    qt: BTreeMap<MultiIndex, Polynomial>,
}

impl CanonicalBasis {
    /// Solves the duality system weight by weight.
    pub fn build(fields: &InvariantFields, max_weight: u32) -> Result<Self> {
        let w = fields.weights().to_vec();
        let mut q = BTreeMap::new();
        for m in 0..=max_weight {
            for (alpha, p) in solve_weight(fields, Side::Left, m)? {
                q.insert(alpha, p);
            }
        }
        let n = w.len();
        let neg: Vec<Polynomial> = Polynomial::coords(blocks::X, n).iter().map(|p| -p).collect();
        let qt = q.iter().map(|(a, p)| (a.clone(), p.substitute_block(blocks::X, &neg))).collect();
        Ok(CanonicalBasis { weights: w, max_weight, q, qt })
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `q_α` in block `x`.
    pub fn q(&self, alpha: &MultiIndex) -> Result<&Polynomial> {
        self.q.get(alpha).ok_or(Error::WeightTooLarge { requested: alpha.weight(&self.weights), max: self.max_weight })
    }

    /// `q̃_α(x) = q_α(x⁻¹) = q_α(−x)` in block `x`.
    pub fn qt(&self, alpha: &MultiIndex) -> Result<&Polynomial> {
        self.qt.get(alpha).ok_or(Error::WeightTooLarge { requested: alpha.weight(&self.weights), max: self.max_weight })
    }

    /// `q_α` in another block.
    pub fn q_in(&self, alpha: &MultiIndex, block: Block) -> Result<Polynomial> {
        Ok(self.q(alpha)?.rename_block(blocks::X, block))
    }

    /// `q̃_α` in another block.
    pub fn qt_in(&self, alpha: &MultiIndex, block: Block) -> Result<Polynomial> {
        Ok(self.qt(alpha)?.rename_block(blocks::X, block))
    }

    /// Indices with `[α] = m`.
    pub fn indices_of_weight(&self, m: u32) -> Vec<MultiIndex> {
        monomials_of_weight(&self.weights, m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.q.iter()
    }

    fn check_weight(&self, m: u32) -> Result<()> {
        if m > self.max_weight {
            return Err(Error::WeightTooLarge { requested: m, max: self.max_weight });
        }
        Ok(())
    }

    /// `q̃_a q̃_b = Σ_γ d_γ q̃_γ` over `[γ] = [a] + [b]`.
    pub fn qt_product(&self, a: &MultiIndex, b: &MultiIndex) -> Result<BTreeMap<MultiIndex, Rational>> {
        let m = a.weight(&self.weights) + b.weight(&self.weights);
        self.check_weight(m)?;
        let target = self.qt(a)? * self.qt(b)?;
        let idx = self.indices_of_weight(m);
        let basis: Vec<Polynomial> = idx.iter().map(|g| self.qt(g).cloned()).collect::<Result<_>>()?;
        let c = linalg::express_in_span(&target, &basis)?;
        Ok(idx.into_iter().zip(c).filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Expands a polynomial in one block, homogeneous of weight `m`, in the
    /// `q̃` basis of that block.
    pub fn expand_qt(&self, p: &Polynomial, block: Block, m: u32) -> Result<BTreeMap<MultiIndex, Rational>> {
        self.check_weight(m)?;
        let idx = self.indices_of_weight(m);
        let basis: Vec<Polynomial> = idx.iter().map(|g| self.qt_in(g, block)).collect::<Result<_>>()?;
        let c = linalg::express_in_span(p, &basis)?;
        Ok(idx.into_iter().zip(c).filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// Solves `(X^β q_α)(e) = δ_{βα}` over all `[α] = [β] = m`.
fn solve_weight(fields: &InvariantFields, side: Side, m: u32) -> Result<Vec<(MultiIndex, Polynomial)>> {
    let idx = monomials_of_weight(fields.weights(), m);
    let k = idx.len();
    let monos: Vec<Polynomial> = idx.iter().map(|g| Polynomial::monomial(blocks::X, g, Rational::one())).collect();
    // a[β][i] = (X^β x^{γ_i})(e)
    let a: Vec<Vec<Rational>> = idx
        .iter()
        .map(|beta| monos.iter().map(|mono| fields.apply_power(side, beta, mono).constant_term()).collect())
        .collect();
    let ident: Vec<Vec<Rational>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let sol = linalg::solve_multi(&a, &ident).map_err(|_| Error::SingularSystem(format!("duality system at weight {m}")))?;
    Ok(idx
        .iter()
        .enumerate()
        .map(|(col, alpha)| {
            let mut p = Polynomial::zero();
            for (i, mono) in monos.iter().enumerate() {
                p += mono.scale(&sol[i][col]);
            }
            (alpha.clone(), p)
        })
        .collect())
}

/// The canonical polynomial `q_α` alone.
pub fn canonical_q(fields: &InvariantFields, alpha: &MultiIndex) -> Result<Polynomial> {
    let m = alpha.weight(fields.weights());
    solve_weight(fields, Side::Left, m)?
        .into_iter()
        .find(|(a, _)| a == alpha)
        .map(|(_, p)| p)
        .ok_or_else(|| Error::SingularSystem("index not found".into()))
}

/// `(X^β q_α)(e)` table entry.
pub fn duality_pairing(fields: &InvariantFields, basis: &CanonicalBasis, beta: &MultiIndex, alpha: &MultiIndex) -> Result<Rational> {
    Ok(fields.apply_power(Side::Left, beta, basis.q(alpha)?).constant_term())
}

/// Expresses a left-invariant operator as `Σ c_γ X^γ` with `c_γ = (op q_γ)(e)`,
/// then verifies the identity on every monomial up to the basis weight.
pub fn pbw_expand(op: &DiffOp, fields: &InvariantFields, basis: &CanonicalBasis) -> Result<BTreeMap<MultiIndex, Rational>> {
    let w = fields.weights();
    // Largest degree any term can carry: ∂-weight minus the lowest
    // coefficient weight.
    let top = op
        .terms()
        .map(|(b, p)| {
            let low = p.terms().map(|(m, _)| m.index_in(op.block(), op.dim()).weight(w)).min().unwrap_or(0);
            b.weight(w).saturating_sub(low)
        })
        .max()
        .unwrap_or(0);
    if top > basis.max_weight() {
        return Err(Error::WeightTooLarge { requested: top, max: basis.max_weight() });
    }
    let mut out = BTreeMap::new();
    for gamma in monomials_up_to_weight(w, top) {
        let c = op.apply(basis.q(&gamma)?).constant_term();
        if !c.is_zero() {
            out.insert(gamma, c);
        }
    }
    for mono in monomials_up_to_weight(w, basis.max_weight()) {
        let m = Polynomial::monomial(blocks::X, &mono, Rational::one());
        let mut rhs = Polynomial::zero();
        for (g, c) in &out {
            rhs += fields.apply_power(Side::Left, g, &m).scale(c);
        }
        if rhs != op.apply(&m) {
            return Err(Error::NotInvariant(format!("identity fails on x^{mono}")));
        }
    }
    Ok(out)
}

/// The four conversion families between derivative bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConversionKind {
    /// `X^α = Σ P_{α,β} X̃^β`
    P,
    /// `X̃^α = Σ Q_{α,β} X^β`
    Q,
    /// `X^α = Σ R_{α,β} ∂^β`
    R,
    /// `∂^α = Σ S_{α,β} X^β`
    S,
}

impl ConversionKind {
    pub const ALL: [ConversionKind; 4] = [ConversionKind::P, ConversionKind::Q, ConversionKind::R, ConversionKind::S];

    /// `(source, target)` families; `None` means `∂`.
    fn families(self) -> (Option<Side>, Option<Side>) {
        match self {
            ConversionKind::P => (Some(Side::Left), Some(Side::Right)),
            ConversionKind::Q => (Some(Side::Right), Some(Side::Left)),
            ConversionKind::R => (Some(Side::Left), None),
            ConversionKind::S => (None, Some(Side::Left)),
        }
    }
}

fn family_power(fields: &InvariantFields, fam: Option<Side>, alpha: &MultiIndex) -> DiffOp {
    match fam {
        Some(side) => fields.power(side, alpha),
        None => DiffOp::partial(fields.dim(), alpha),
    }
}

fn family_apply(fields: &InvariantFields, fam: Option<Side>, alpha: &MultiIndex, p: &Polynomial) -> Polynomial {
    match fam {
        Some(side) => fields.apply_power(side, alpha, p),
        None => p.derivative_index(blocks::X, alpha),
    }
}

/// Rewrites `op` (normal form) as `Σ c_β(x) Y^β` for an invariant family `Y`.
///
/// `Y^β = ∂^β + (same order, strictly larger weight) + (lower order)`, so
/// repeatedly cancelling the lightest term of top order terminates.
pub fn reduce_in_family(fields: &InvariantFields, side: Side, op: &DiffOp) -> BTreeMap<MultiIndex, Polynomial> {
    let w = fields.weights().to_vec();
    let mut rem = op.clone();
    let mut out: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
    let mut cache: BTreeMap<MultiIndex, DiffOp> = BTreeMap::new();
    while let Some(ord) = rem.order() {
        let beta = rem
            .terms()
            .filter(|(b, _)| b.abs() == ord)
            .min_by(|(a, _), (b, _)| (a.weight(&w), *a).cmp(&(b.weight(&w), *b)))
            .map(|(b, _)| b.clone())
            .expect("nonempty");
        let c = rem.coeff(&beta);
        let y = cache.entry(beta.clone()).or_insert_with(|| fields.power(side, &beta));
        rem = rem.sub(&y.premul(&c));
        let slot = out.entry(beta.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            out.remove(&beta);
        }
    }
    out
}

/// Conversion polynomials for one `α`.
pub fn conversion_polys(fields: &InvariantFields, alpha: &MultiIndex, kind: ConversionKind) -> BTreeMap<MultiIndex, Polynomial> {
    let (src, dst) = kind.families();
    let op = family_power(fields, src, alpha);
    match dst {
        None => op.terms().map(|(b, p)| (b.clone(), p.clone())).collect(),
        Some(side) => reduce_in_family(fields, side, &op),
    }
}

/// Checks a conversion table as an operator identity on all monomials of
/// weight `<= max_weight`, plus the shape constraints
/// `|β| <= |α|`, `[β] >= [α]`, `wt(P_{α,β}) = [β] − [α]`.
pub fn verify_conversion(
    fields: &InvariantFields,
    alpha: &MultiIndex,
    kind: ConversionKind,
    table: &BTreeMap<MultiIndex, Polynomial>,
    max_weight: u32,
) -> bool {
    let w = fields.weights();
    let wa = alpha.weight(w);
    for (b, p) in table {
        let wb = b.weight(w);
        if b.abs() > alpha.abs() || wb < wa || !p.homogeneous_weight(w).allows(wb - wa) {
            return false;
        }
    }
    let (src, dst) = kind.families();
    for mono in monomials_up_to_weight(w, max_weight) {
        let m = Polynomial::monomial(blocks::X, &mono, Rational::one());
        let lhs = family_apply(fields, src, alpha, &m);
        let mut rhs = Polynomial::zero();
        for (b, p) in table {
            rhs += p * &family_apply(fields, dst, b, &m);
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// `P(x, y) = Σ_{[α] <= M} q_α(y) (X^α f)(x)`.
pub fn taylor_poly(fields: &InvariantFields, basis: &CanonicalBasis, f: &Polynomial, m: u32) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for alpha in monomials_up_to_weight(fields.weights(), m) {
        let d = fields.apply_power(Side::Left, &alpha, f);
        if d.is_zero() {
            continue;
        }
        out += &basis.q_in(&alpha, blocks::Y)? * &d;
    }
    Ok(out)
}

/// `q_α(x·y) = Σ c_{α1,α2} q_{α1}(x) q_{α2}(y)`; entries keyed by `(α1, α2)`.
pub fn q_product_coeffs(
    law: &GroupLaw,
    basis: &CanonicalBasis,
    alpha: &MultiIndex,
) -> Result<BTreeMap<(MultiIndex, MultiIndex), Rational>> {
    let w = basis.weights().to_vec();
    let m = alpha.weight(&w);
    let n = law.dim();
    let xy = law.multiply(&Polynomial::coords(blocks::X, n), &Polynomial::coords(blocks::Y, n));
    let target = basis.q(alpha)?.substitute_partial(&block_bindings(blocks::X, &xy));
    let mut keys = Vec::new();
    let mut polys = Vec::new();
    for m1 in 0..=m {
        for a1 in monomials_of_weight(&w, m1) {
            for a2 in monomials_of_weight(&w, m - m1) {
                polys.push(&basis.q_in(&a1, blocks::X)? * &basis.q_in(&a2, blocks::Y)?);
                keys.push((a1.clone(), a2));
            }
        }
    }
    let c = linalg::express_in_span(&target, &polys)?;
    Ok(keys.into_iter().zip(c).filter(|(_, c)| !c.is_zero()).collect())
}

/// Monomials as polynomials, for identity checks.
pub fn monomial_basis(weights: &[u32], max_weight: u32) -> Vec<Polynomial> {
    monomials_up_to_weight(weights, max_weight)
        .iter()
        .map(|g| Polynomial::term(Monomial::from_index(blocks::X, g), Rational::one()))
        .collect()
}

/// `true` when all `(X^β q_α)(e) = δ_{βα}` for `[α], [β] <= m`.
pub fn check_duality(fields: &InvariantFields, basis: &CanonicalBasis, m: u32) -> Result<bool> {
    let idx = monomials_up_to_weight(fields.weights(), m);
    for alpha in &idx {
        let q = basis.q(alpha)?;
        for beta in &idx {
            let v = fields.apply_power(Side::Left, beta, q);
            let expect = if alpha == beta { Rational::one() } else { Rational::zero() };
            if v.constant_term() != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Identity-with-parameter helper: all coordinates zero.
pub fn origin(n: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(); n]
}
