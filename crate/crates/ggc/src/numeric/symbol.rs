//! Euclidean symbols on `R × R̂` and their τ-quantization.

use std::collections::BTreeMap;
use std::sync::Arc;

use ggc_core::expansion::{compose_expansion, Expansion, Sym};
use ggc_core::group::{catalog, GroupLaw};
use ggc_core::invariant::{CanonicalBasis, InvariantFields};
use ggc_core::poly::{blocks, Block};
use ggc_core::tau::QuantizingFunction;
use ggc_core::{Polynomial, Rational};
use ndarray::Array2;
use num_traits::ToPrimitive;

use super::{default_test_vectors, relative_residual, Bound, Grid, GridOperator, NumericError, ResidualReport, Result, C64};

/// Block tag of the frequency variable in symbol text (`xi1`).
pub const XI: Block = Block::lit("xi");

/// Complex polynomial `Σ c_{pq} x^p ξ^q`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CPoly {
    terms: BTreeMap<(u32, u32), C64>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn monomial(p: u32, q: u32, c: C64) -> Self {
        let mut out = CPoly::zero();
        out.add_term(p, q, c);
        out
    }

    /// From a rational polynomial in `x1` and `xi1`.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let mut out = CPoly::zero();
        for (m, c) in p.terms() {
            let (mut px, mut pq) = (0, 0);
            for (v, e) in m.factors() {
                match (v.block, v.index) {
                    (b, 1) if b == blocks::X => px = *e,
                    (b, 1) if b == XI => pq = *e,
                    _ => return Err(ggc_core::Error::UnboundVariable(v.to_string()).into()),
                }
            }
            out.add_term(px, pq, C64::new(c.to_f64().unwrap_or(f64::NAN), 0.0));
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: C64) {
        let slot = self.terms.entry((p, q)).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            self.terms.remove(&(p, q));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (&(p, q), &c) in &other.terms {
            out.add_term(p, q, c);
        }
        out
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (&(p1, q1), &c1) in &self.terms {
            for (&(p2, q2), &c2) in &other.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: C64) -> CPoly {
        let mut out = CPoly::zero();
        for (&(p, q), &d) in &self.terms {
            out.add_term(p, q, c * d);
        }
        out
    }

    pub fn conj(&self) -> CPoly {
        CPoly { terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect() }
    }

    /// `∂_x^a ∂_ξ^b`.
    pub fn derivative(&self, a: u32, b: u32) -> CPoly {
        let falling = |n: u32, k: u32| (0..k).map(|i| (n - i) as f64).product::<f64>();
        let mut out = CPoly::zero();
        for (&(p, q), &c) in &self.terms {
            if p >= a && q >= b {
                out.add_term(p - a, q - b, c * falling(p, a) * falling(q, b));
            }
        }
        out
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_xi(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, xi: f64) -> C64 {
        self.terms.iter().map(|(&(p, q), &c)| c * x.powi(p as i32) * xi.powi(q as i32)).sum()
    }
}

/// A symbol `σ(x, ξ)`: either an exact polynomial or an opaque evaluator.
#[derive(Clone)]
pub enum EuclidSymbol {
    Poly(CPoly),
    Func(Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>),
}

impl std::fmt::Debug for EuclidSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EuclidSymbol::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            EuclidSymbol::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl EuclidSymbol {
    /// Parses the polynomial grammar over `x1` (position) and `xi1` (frequency).
    pub fn parse(s: &str) -> Result<Self> {
        let p: Polynomial = s.parse()?;
        Ok(EuclidSymbol::Poly(CPoly::from_polynomial(&p)?))
    }

    pub fn eval(&self, x: f64, xi: f64) -> C64 {
        match self {
            EuclidSymbol::Poly(p) => p.eval(x, xi),
            EuclidSymbol::Func(f) => f(x, xi),
        }
    }

    pub fn poly(&self) -> Option<&CPoly> {
        match self {
            EuclidSymbol::Poly(p) => Some(p),
            EuclidSymbol::Func(_) => None,
        }
    }

    pub fn conj(&self) -> EuclidSymbol {
        match self {
            EuclidSymbol::Poly(p) => EuclidSymbol::Poly(p.conj()),
            EuclidSymbol::Func(f) => {
                let f = f.clone();
                EuclidSymbol::Func(Arc::new(move |x, xi| f(x, xi).conj()))
            }
        }
    }
}

/// `Δ^α X^β σ` on `R^1`: `X = ∂_x` and `Δ^α = (-i ∂_ξ)^α / α!`, which is the
/// Fourier image of multiplying the kernel by `q̃_α(y) = (-y)^α/α!`.
pub fn delta_x_operators(sigma: &EuclidSymbol, alpha: u32, beta: u32) -> Result<EuclidSymbol> {
    let p = sigma.poly().ok_or(NumericError::NeedsPolynomial)?;
    let fact: f64 = (1..=alpha).map(f64::from).product();
    let scale = C64::new(0.0, -1.0).powu(alpha) / fact;
    Ok(EuclidSymbol::Poly(p.derivative(beta, alpha).scale(scale)))
}

/// Kernel quantization
/// `K(x_a, y_b) = (1/N) Σ_k e^{i(x_a - y_b)ξ_k} σ(x_a - t(x_a - y_b), ξ_k)`.
pub fn quantize_tau_rn(sigma: &EuclidSymbol, t: f64, grid: &Grid) -> (GridOperator, Vec<String>) {
    let x = grid.x();
    let xi = grid.xi_weighted();
    let n = grid.n;
    let mut k = Array2::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            let d = x[a] - x[b];
            let base = x[a] - t * d;
            let mut s = C64::new(0.0, 0.0);
            for &(f, w) in &xi {
                s += C64::from_polar(w, d * f) * sigma.eval(base, f);
            }
            k[[a, b]] = s / n as f64;
        }
    }
    let mut adv = Vec::new();
    if let Some(p) = sigma.poly() {
        // Degree times period against the number of resolved modes.
        let deg = p.degree_x() + p.degree_xi();
        if deg as f64 * grid.period / (2.0 * std::f64::consts::PI) > n as f64 / 2.0 {
            adv.push("GRID_TOO_COARSE".to_string());
        }
    }
    (GridOperator(k), adv)
}

/// Weyl and Kohn-Nirenberg adjoint residuals `‖Op^t(σ)* − Op^t(σ̄)‖ / ‖·‖`
/// on full matrices.
pub fn adjoint_check(sigma: &EuclidSymbol, t: f64, grid: &Grid) -> f64 {
    let (a, _) = quantize_tau_rn(sigma, t, grid);
    let (b, _) = quantize_tau_rn(&sigma.conj(), t, grid);
    relative_residual(&a.adjoint().0, &b.0)
}

/// Binds `s1`, `s2` (and `s`, `s*`) of a one-dimensional expansion to
/// polynomial symbols and sums all orders.
pub fn bind_expansion(e: &Expansion, symbols: &BTreeMap<Sym, EuclidSymbol>) -> Result<CPoly> {
    let mut out = CPoly::zero();
    for j in e.orders() {
        for term in e.order_terms(j) {
            let c = term.coeff.to_f64().unwrap_or(f64::NAN);
            let mut acc = CPoly::monomial(0, 0, C64::new(0.0, 1.0).powu(term.i_power as u32) * c);
            for f in &term.factors {
                if f.delta.dim() != 1 {
                    return Err(NumericError::NotOneDimensional);
                }
                let s = symbols.get(&f.sym).ok_or(NumericError::NeedsPolynomial)?;
                let d = delta_x_operators(s, f.delta.0[0], f.deriv.0[0])?;
                acc = acc.mul(d.poly().expect("polynomial"));
            }
            out = out.add(&acc);
        }
    }
    Ok(out)
}

/// Order at which the composition of two polynomial symbols terminates.
pub fn terminating_order(s1: &CPoly, s2: &CPoly) -> u32 {
    s1.degree_x().min(s2.degree_xi()) + s1.degree_xi().min(s2.degree_x())
}

/// `Op^t(σ1) Op^t(σ2)` against `Op^t(Σ_{j≤M} ω_j)`, with `ω_j` assembled by
/// the exact engine for `τ(x) = t x` on `R^1` and compared on Gaussian test
/// vectors.
pub fn moyal_exactness_check(s1: &EuclidSymbol, s2: &EuclidSymbol, grid: &Grid, m: u32, t: &Rational) -> Result<ResidualReport> {
    let p1 = s1.poly().ok_or(NumericError::NeedsPolynomial)?;
    let p2 = s2.poly().ok_or(NumericError::NeedsPolynomial)?;
    let law = GroupLaw::bch(&catalog::abelian(1))?;
    let basis = CanonicalBasis::build(&InvariantFields::new(&law), m.max(1))?;
    let tau = QuantizingFunction::new(&law, vec![Polynomial::var_in(blocks::X, 1).scale(t)])?;
    let e = compose_expansion(&tau, &basis, m)?;
    let mut syms = BTreeMap::new();
    syms.insert(Sym::S1, s1.clone());
    syms.insert(Sym::S2, s2.clone());
    let omega = EuclidSymbol::Poly(bind_expansion(&e, &syms)?);
    let tf = t.to_f64().unwrap_or(f64::NAN);
    let (a1, adv1) = quantize_tau_rn(s1, tf, grid);
    let (a2, adv2) = quantize_tau_rn(s2, tf, grid);
    let (b, adv3) = quantize_tau_rn(&omega, tf, grid);
    let g = default_test_vectors(grid);
    let r = relative_residual(&a1.apply(&a2.apply(&g)), &b.apply(&g));
    let mut rep = ResidualReport::new("moyal", grid, r, super::TOL_EXACT, Bound::Max)
        .param("m", m)
        .param("t", t)
        .param("terminating", terminating_order(p1, p2));
    rep.advisories = [adv1, adv2, adv3].concat();
    rep.advisories.dedup();
    Ok(rep)
}
