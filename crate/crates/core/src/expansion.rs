//! Formal asymptotic expansions: sums of products of factors
//! `Δ^γ X^β σ` grouped by homogeneous order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariant::{pbw_expand, CanonicalBasis, InvariantFields, Side};
use crate::poly::{fmt_rational, monomials_of_weight, rat, MultiIndex, Rational};
use crate::tau::{
    adjoint_coeffs, change_coeffs, composition_coeffs, poisson_bracket_spec, ChangeDirection, CoefficientTable,
    QuantizingFunction,
};

/// Opaque symbol identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    S1,
    S2,
    /// `σ*`
    SStar,
    S,
}

impl Sym {
    pub fn as_str(self) -> &'static str {
        match self {
            Sym::S1 => "s1",
            Sym::S2 => "s2",
            Sym::SStar => "s*",
            Sym::S => "s",
        }
    }

    pub fn parse(s: &str) -> Option<Sym> {
        [Sym::S1, Sym::S2, Sym::SStar, Sym::S].into_iter().find(|x| x.as_str() == s)
    }
}

/// `Δ^delta X^deriv sym`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub sym: Sym,
    pub delta: MultiIndex,
    pub deriv: MultiIndex,
}

impl Factor {
    pub fn new(sym: Sym, delta: MultiIndex, deriv: MultiIndex) -> Self {
        Factor { sym, delta, deriv }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('(')?;
        if !self.delta.is_zero() {
            write!(f, "D^{{{}}} ", self.delta)?;
        }
        if !self.deriv.is_zero() {
            write!(f, "X^{{{}}} ", self.deriv)?;
        }
        write!(f, "{})", self.sym.as_str())
    }
}

/// `coeff · i^{i_power} · Π factors`, with `i_power ∈ {0, 1}` after
/// normalization (`i² = −1` is folded into the sign).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSymbolTerm {
    pub coeff: Rational,
    pub i_power: u8,
    pub factors: Vec<Factor>,
}

impl FormalSymbolTerm {
    pub fn new(coeff: Rational, i_power: u8, factors: Vec<Factor>) -> Self {
        let mut t = FormalSymbolTerm { coeff, i_power: i_power % 4, factors };
        if t.i_power >= 2 {
            t.coeff = -t.coeff;
            t.i_power -= 2;
        }
        t
    }

    /// Sum of `[deriv]` over factors.
    pub fn order(&self, weights: &[u32]) -> u32 {
        self.factors.iter().map(|f| f.deriv.weight(weights)).sum()
    }
}

/// Terms grouped by order; within an order like terms are merged and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expansion {
    pub kind: String,
    pub tau: String,
    pub max_order: u32,
    orders: BTreeMap<u32, BTreeMap<(u8, Vec<Factor>), Rational>>,
}

impl Expansion {
    pub fn new(kind: &str, tau: &str, max_order: u32) -> Self {
        Expansion { kind: kind.into(), tau: tau.into(), max_order, orders: BTreeMap::new() }
    }

    pub fn add(&mut self, order: u32, term: FormalSymbolTerm) {
        let term = FormalSymbolTerm::new(term.coeff, term.i_power, term.factors);
        if term.coeff.is_zero() {
            return;
        }
        let group = self.orders.entry(order).or_default();
        let key = (term.i_power, term.factors);
        let slot = group.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += term.coeff;
        if slot.is_zero() {
            group.remove(&key);
            if group.is_empty() {
                self.orders.remove(&order);
            }
        }
    }

    /// Adds `coeff · Π (Δ^{δ_1}⋯Δ^{δ_k} X^β sym)` with each Δ product
    /// reduced in the `q̃` basis.
    pub fn add_product(
        &mut self,
        basis: &CanonicalBasis,
        order: u32,
        coeff: &Rational,
        i_power: u8,
        factors: &[(Sym, Vec<MultiIndex>, MultiIndex)],
    ) -> Result<()> {
        let mut partial: Vec<(Rational, Vec<Factor>)> = vec![(coeff.clone(), Vec::new())];
        for (sym, deltas, deriv) in factors {
            let reduced = delta_product(basis, deltas)?;
            let mut next = Vec::new();
            for (c, fs) in &partial {
                for (g, d) in &reduced {
                    let mut fs2 = fs.clone();
                    fs2.push(Factor::new(*sym, g.clone(), deriv.clone()));
                    next.push((c * d, fs2));
                }
            }
            partial = next;
        }
        for (c, fs) in partial {
            self.add(order, FormalSymbolTerm::new(c, i_power, fs));
        }
        Ok(())
    }

    /// Terms of order `j` in canonical order.
    pub fn order_terms(&self, j: u32) -> Vec<FormalSymbolTerm> {
        self.orders
            .get(&j)
            .map(|g| g.iter().map(|((ip, fs), c)| FormalSymbolTerm { coeff: c.clone(), i_power: *ip, factors: fs.clone() }).collect())
            .unwrap_or_default()
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.orders.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.orders.values().map(BTreeMap::len).sum()
    }

    /// Only the orders `<= m`.
    pub fn truncated(&self, m: u32) -> Expansion {
        let mut out = self.clone();
        out.orders.retain(|&j, _| j <= m);
        out.max_order = out.max_order.min(m);
        out
    }

    /// `self − other` restricted to one order.
    pub fn order_difference(&self, other: &Expansion, j: u32) -> Vec<FormalSymbolTerm> {
        let mut diff = Expansion::default();
        for t in self.order_terms(j) {
            diff.add(j, t);
        }
        for t in other.order_terms(j) {
            diff.add(j, FormalSymbolTerm { coeff: -t.coeff, ..t });
        }
        diff.order_terms(j)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[FormalSymbolTerm]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        match (k, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let mag = t.coeff.abs();
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || (t.factors.is_empty() && t.i_power == 0) {
            parts.push(fmt_rational(&mag));
        }
        if t.i_power == 1 {
            parts.push("i".into());
        }
        let fs: String = t.factors.iter().map(ToString::to_string).collect();
        if !fs.is_empty() {
            parts.push(fs);
        }
        f.write_str(&parts.join(" "))?;
    }
    Ok(())
}

/// One line per order: `order j: <terms>`; `0` for an empty expansion.
impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (k, j) in self.orders().enumerate() {
            if k > 0 {
                f.write_char('\n')?;
            }
            write!(f, "order {j}: ")?;
            write_terms(f, &self.order_terms(j))?;
        }
        Ok(())
    }
}

/// Renders a bare list of terms the same way an order line is rendered.
pub fn render_terms(terms: &[FormalSymbolTerm]) -> String {
    struct T<'a>(&'a [FormalSymbolTerm]);
    impl fmt::Display for T<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_terms(f, self.0)
        }
    }
    format!("{}", T(terms))
}

/// `Δ^{δ_1}⋯Δ^{δ_k} = Σ_γ d_γ Δ^γ` from `q̃_{δ_1}⋯q̃_{δ_k} = Σ d_γ q̃_γ`.
pub fn delta_product(basis: &CanonicalBasis, deltas: &[MultiIndex]) -> Result<BTreeMap<MultiIndex, Rational>> {
    let n = basis.dim();
    let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    acc.insert(MultiIndex::zero(n), Rational::one());
    for d in deltas {
        if d.is_zero() {
            continue;
        }
        let mut next: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (g, c) in &acc {
            let prod = if g.is_zero() {
                let mut m = BTreeMap::new();
                m.insert(d.clone(), Rational::one());
                m
            } else {
                basis.qt_product(g, d)?
            };
            for (h, e) in prod {
                *next.entry(h).or_insert_with(Rational::zero) += c * &e;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    Ok(acc)
}

fn tau_label(tau: &QuantizingFunction) -> String {
    tau.coords().iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// `ω_j = Σ_{[α]+[β]=j} Σ c_{α1,α2} c_{β1,β2} (Δ^{α2}Δ^{β1}X^α σ1)(Δ^{β2}Δ^{α1}X^β σ2)`.
pub fn compose_expansion(tau: &QuantizingFunction, basis: &CanonicalBasis, m: u32) -> Result<Expansion> {
    let (t1, t2) = composition_coeffs(tau, basis, m)?;
    compose_from_tables(&tau_label(tau), basis, &t1, &t2, m)
}

/// Assembly from precomputed composition tables.
pub fn compose_from_tables(
    label: &str,
    basis: &CanonicalBasis,
    t1: &CoefficientTable,
    t2: &CoefficientTable,
    m: u32,
) -> Result<Expansion> {
    let w = basis.weights().to_vec();
    let mut out = Expansion::new("compose", label, m);
    for j in 0..=m {
        for ja in 0..=j {
            for alpha in monomials_of_weight(&w, ja) {
                let rows1: Vec<_> = t1.row(&alpha).collect();
                for beta in monomials_of_weight(&w, j - ja) {
                    for (s2, c2) in t2.row(&beta) {
                        for (s1, c1) in &rows1 {
                            let (a1, a2) = (&s1[0], &s1[1]);
                            let (b1, b2) = (&s2[0], &s2[1]);
                            out.add_product(
                                basis,
                                j,
                                &(*c1 * c2),
                                0,
                                &[
                                    (Sym::S1, vec![a2.clone(), b1.clone()], alpha.clone()),
                                    (Sym::S2, vec![b2.clone(), a1.clone()], beta.clone()),
                                ],
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ c_{α',α} Δ^{α'} X^α σ` from a one-block table.
fn single_from_table(kind: &str, label: &str, sym: Sym, basis: &CanonicalBasis, t: &CoefficientTable) -> Expansion {
    let w = basis.weights();
    let mut out = Expansion::new(kind, label, t.max_weight);
    for ((alpha, split), c) in &t.entries {
        out.add(alpha.weight(w), FormalSymbolTerm::new(c.clone(), 0, vec![Factor::new(sym, split[0].clone(), alpha.clone())]));
    }
    out
}

/// Expansion of the adjoint symbol in terms of `σ*`.
pub fn adjoint_expansion(tau: &QuantizingFunction, basis: &CanonicalBasis, m: u32) -> Result<Expansion> {
    let t = adjoint_coeffs(tau, basis, m)?;
    Ok(single_from_table("adjoint", &tau_label(tau), Sym::SStar, basis, &t))
}

/// `σ_τ ∼ Σ c^{τ,KN} Δ^{α'}X^α σ` (or the reverse direction).
pub fn change_expansion(tau: &QuantizingFunction, basis: &CanonicalBasis, dir: ChangeDirection, m: u32) -> Result<Expansion> {
    let t = change_coeffs(tau, basis, dir, m)?;
    let kind = match dir {
        ChangeDirection::TauToKn => "change_to_kn",
        ChangeDirection::KnToTau => "change_from_kn",
    };
    Ok(single_from_table(kind, &tau_label(tau), Sym::S, basis, &t))
}

/// Substitutes `inner` (single-symbol) into `outer` (single-symbol):
/// `Δ^{β'}X^β(Δ^{α'}X^α σ) = (Δ^{β'}Δ^{α'}) (X^β X^α) σ`, with both
/// products reduced to normal form. Orders above `m` are dropped.
pub fn chain_single(outer: &Expansion, inner: &Expansion, fields: &InvariantFields, basis: &CanonicalBasis, m: u32) -> Result<Expansion> {
    let mut out = Expansion::new("chain", &outer.tau, m);
    let mut pbw_cache: BTreeMap<(MultiIndex, MultiIndex), BTreeMap<MultiIndex, Rational>> = BTreeMap::new();
    for jo in outer.orders() {
        for to in outer.order_terms(jo) {
            let [fo] = to.factors.as_slice() else {
                return Err(Error::KindUnsupported("chain_single needs single-factor terms".into()));
            };
            for ji in inner.orders() {
                if jo + ji > m {
                    continue;
                }
                for ti in inner.order_terms(ji) {
                    let [fi] = ti.factors.as_slice() else {
                        return Err(Error::KindUnsupported("chain_single needs single-factor terms".into()));
                    };
                    let key = (fo.deriv.clone(), fi.deriv.clone());
                    if !pbw_cache.contains_key(&key) {
                        let op = fields.power(Side::Left, &fo.deriv).compose(&fields.power(Side::Left, &fi.deriv));
                        pbw_cache.insert(key.clone(), pbw_expand(&op, fields, basis)?);
                    }
                    let xs = &pbw_cache[&key];
                    let ds = delta_product(basis, &[fo.delta.clone(), fi.delta.clone()])?;
                    let c = &to.coeff * &ti.coeff;
                    for (g, dg) in &ds {
                        for (h, xh) in xs {
                            out.add(
                                jo + ji,
                                FormalSymbolTerm::new(&c * dg * xh, to.i_power + ti.i_power, vec![Factor::new(fi.sym, g.clone(), h.clone())]),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Coefficient relating `ω_1` to `Σ_{[α]=1}[(X^α σ1)(Δ^α σ2) − (Δ^α σ1)(X^α σ2)]`.
///
/// With `Δ` quantizing multiplication of the kernel by `q̃_α`, the
/// composition formula gives `−1/2` for every symmetric (HP) function on a
/// stratified group; on `R^n` this is the Moyal term `(i/2){σ1, σ2}`.
pub fn poisson_factor() -> Rational {
    rat(-1, 2)
}

/// `Σ_{j in first stratum} [(X^{e_j} σ1)(Δ^{e_j} σ2) − (Δ^{e_j} σ1)(X^{e_j} σ2)]` as order-1 terms.
pub fn poisson_terms(indices: &[usize], n: usize, scale: &Rational) -> Vec<FormalSymbolTerm> {
    let z = MultiIndex::zero(n);
    let mut e = Expansion::default();
    for &j in indices {
        let ej = MultiIndex::unit(n, j);
        e.add(1, FormalSymbolTerm::new(scale.clone(), 0, vec![Factor::new(Sym::S1, z.clone(), ej.clone()), Factor::new(Sym::S2, ej.clone(), z.clone())]));
        e.add(1, FormalSymbolTerm::new(-scale, 0, vec![Factor::new(Sym::S1, ej.clone(), z.clone()), Factor::new(Sym::S2, z.clone(), ej)]));
    }
    e.order_terms(1)
}

/// Checks that `ω_1` equals [`poisson_factor`] times the first-stratum
/// bracket sum. Returns the offending terms on mismatch.
pub fn poisson_check(tau: &QuantizingFunction, basis: &CanonicalBasis) -> Result<Rational> {
    let idx = poisson_bracket_spec(tau.law())?;
    if !tau.is_symmetric().symmetric {
        return Err(Error::Mismatch(vec!["quantizing function is not symmetric".into()]));
    }
    let omega = compose_expansion(tau, basis, 1)?;
    let expect = poisson_terms(&idx, tau.dim(), &poisson_factor());
    let mut got = Expansion::default();
    for t in omega.order_terms(1) {
        got.add(1, t);
    }
    let mut want = Expansion::default();
    for t in expect {
        want.add(1, t);
    }
    let diff = got.order_difference(&want, 1);
    if diff.is_empty() {
        Ok(poisson_factor())
    } else {
        Err(Error::Mismatch(diff.iter().map(|t| render_terms(core::slice::from_ref(t))).collect()))
    }
}
