//! Graded Lie algebras, group laws in exponential coordinates (first kind)
//! via the Dynkin form of the BCH series, dilations and quasi-norms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{block_bindings, blocks, factorial, rat, Block, Homogeneity, Polynomial, Rational};

/// One structure constant `[X_i, X_j] ∋ c X_k`, 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Rational,
}

/// A finite-dimensional graded Lie algebra with basis `X_1..X_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    pub name: String,
    weights: Vec<u32>,
    entries: Vec<Bracket>,
    /// `table[i][j]` = sparse `k ↦ c_{ij}^k`, both orders filled.
    table: Vec<Vec<BTreeMap<usize, Rational>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Weights,
    Index,
    Antisymmetry,
    Gradation,
    Jacobi,
}

/// A failed structural condition, indices 1-based for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{:?}({}): {}", self.kind, idx.join(","), self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GradedLieAlgebra {
    /// Builds an algebra from weights and structure constants. Entries with
    /// `i < j` imply their antisymmetric partner unless it is given explicitly.
    /// Nothing is validated here; see [`GradedLieAlgebra::validate`].
    pub fn new(name: &str, weights: Vec<u32>, entries: Vec<Bracket>) -> Self {
        let n = weights.len();
        let mut table = vec![vec![BTreeMap::new(); n]; n];
        let explicit = |i: usize, j: usize| entries.iter().any(|e| e.i == i && e.j == j);
        let mut add = |i: usize, j: usize, k: usize, c: Rational| {
            if i < n && j < n && k < n {
                let slot = table[i][j].entry(k).or_insert_with(Rational::zero);
                *slot += c;
                if slot.is_zero() {
                    table[i][j].remove(&k);
                }
            }
        };
        for e in &entries {
            add(e.i, e.j, e.k, e.c.clone());
            if e.i < e.j && !explicit(e.j, e.i) {
                add(e.j, e.i, e.k, -e.c.clone());
            }
        }
        GradedLieAlgebra { name: name.to_string(), weights, entries, table }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// The structure constants as supplied.
    pub fn entries(&self) -> &[Bracket] {
        &self.entries
    }

    /// Homogeneous dimension `Q = Σ v_j`.
    pub fn homogeneous_dim(&self) -> u32 {
        self.weights.iter().sum()
    }

    /// `c_{ij}^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> Rational {
        self.table[i][j].get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `[X_i, X_j]` as a sparse map.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &BTreeMap<usize, Rational> {
        &self.table[i][j]
    }

    /// Bracket of two elements with polynomial coordinates.
    pub fn bracket(&self, u: &[Polynomial], v: &[Polynomial]) -> Vec<Polynomial> {
        let n = self.dim();
        let mut out = vec![Polynomial::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || self.table[i][j].is_empty() {
                    continue;
                }
                let uv = ui * vj;
                for (&k, c) in &self.table[i][j] {
                    out[k] += uv.scale(c);
                }
            }
        }
        out
    }

    /// Antisymmetry, Jacobi and gradation checks plus weight sanity.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let w = &self.weights;
        let mut v = Vec::new();
        if n == 0 {
            v.push(Violation { kind: ViolationKind::Weights, indices: vec![], detail: "empty algebra".into() });
        }
        if w.first().is_some_and(|&w1| w1 != 1) {
            v.push(Violation { kind: ViolationKind::Weights, indices: vec![1], detail: "v_1 must be 1".into() });
        }
        for j in 0..n {
            if w[j] == 0 {
                v.push(Violation { kind: ViolationKind::Weights, indices: vec![j + 1], detail: "weight must be positive".into() });
            }
            if j > 0 && w[j] < w[j - 1] {
                v.push(Violation { kind: ViolationKind::Weights, indices: vec![j, j + 1], detail: "weights must be nondecreasing".into() });
            }
        }
        for e in &self.entries {
            if e.i >= n || e.j >= n || e.k >= n {
                v.push(Violation {
                    kind: ViolationKind::Index,
                    indices: vec![e.i + 1, e.j + 1, e.k + 1],
                    detail: format!("index out of range 1..={n}"),
                });
            }
        }
        for i in 0..n {
            for j in i..n {
                let ks: alloc::collections::BTreeSet<usize> =
                    self.table[i][j].keys().chain(self.table[j][i].keys()).copied().collect();
                for k in ks {
                    if self.c(i, j, k) != -self.c(j, i, k) {
                        v.push(Violation {
                            kind: ViolationKind::Antisymmetry,
                            indices: vec![i + 1, j + 1, k + 1],
                            detail: format!("c_ij^k = {} but c_ji^k = {}", self.c(i, j, k), self.c(j, i, k)),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for (&k, c) in &self.table[i][j] {
                    if !c.is_zero() && w[k] != w[i] + w[j] {
                        v.push(Violation {
                            kind: ViolationKind::Gradation,
                            indices: vec![i + 1, j + 1, k + 1],
                            detail: format!("v_{} = {} but v_{} + v_{} = {}", k + 1, w[k], i + 1, j + 1, w[i] + w[j]),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let jac = self.jacobiator(i, j, k);
                    if let Some((l, c)) = jac.iter().enumerate().find(|(_, c)| !c.is_zero()) {
                        v.push(Violation {
                            kind: ViolationKind::Jacobi,
                            indices: vec![i + 1, j + 1, k + 1],
                            detail: format!("Jacobi sum has coefficient {c} on X_{}", l + 1),
                        });
                    }
                }
            }
        }
        v.sort_by(|a, b| (a.kind, &a.indices).cmp(&(b.kind, &b.indices)));
        v.dedup();
        ValidationReport { violations: v }
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            // [X_a, [X_b, X_c]]
            for (&m, cbc) in &self.table[b][c] {
                for (&l, cam) in &self.table[a][m] {
                    out[l] += cbc * cam;
                }
            }
        }
        out
    }

    /// Basis vector `X_j` (0-based) with constant coordinates.
    fn basis_vector(&self, j: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[j] = Rational::one();
        v
    }

    fn bracket_rational(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                for (&k, c) in &self.table[i][j] {
                    out[k] += ui * vj * c;
                }
            }
        }
        out
    }

    /// Dimensions of the lower central series `g = g^(1) ⊇ g^(2) ⊇ …` up to the first zero term.
    pub fn lower_central_series_dims(&self) -> Vec<usize> {
        let n = self.dim();
        let mut dims = Vec::new();
        let mut current: Vec<Vec<Rational>> = (0..n).map(|j| self.basis_vector(j)).collect();
        let mut guard = 0;
        while !current.is_empty() && guard <= n + 1 {
            dims.push(current.len());
            let mut next = Vec::new();
            for i in 0..n {
                for v in &current {
                    let b = self.bracket_rational(&self.basis_vector(i), v);
                    if b.iter().any(|c| !c.is_zero()) {
                        next.push(b);
                    }
                }
            }
            current = independent_subset(next);
            guard += 1;
        }
        dims
    }

    /// Nilpotency step `s`: number of nonzero terms in the lower central series.
    pub fn step(&self) -> usize {
        self.lower_central_series_dims().len()
    }

    /// True if the weight-1 elements generate everything and weights equal the
    /// stratum index (bracketing with layer 1 maps layer k onto layer k+1).
    pub fn is_stratified(&self) -> bool {
        let n = self.dim();
        let max = self.weights.iter().copied().max().unwrap_or(0);
        let layer = |k: u32| -> Vec<usize> { (0..n).filter(|&j| self.weights[j] == k).collect() };
        for k in 1..=max {
            if layer(k).is_empty() {
                return false;
            }
        }
        for k in 1..max {
            let mut span = Vec::new();
            for &i in &layer(1) {
                for &j in &layer(k) {
                    span.push(self.bracket_rational(&self.basis_vector(i), &self.basis_vector(j)));
                }
            }
            if linalg::rank(&span) != layer(k + 1).len() {
                return false;
            }
        }
        true
    }

    /// Heisenberg structure `[X_j, X_{n+j}] = X_{2n+1}` with weights `(1,…,1,2)`.
    pub fn heisenberg_n(&self) -> Option<usize> {
        let d = self.dim();
        if d < 3 || d % 2 == 0 {
            return None;
        }
        let n = (d - 1) / 2;
        let h = catalog::heisenberg(n);
        (h.weights == self.weights && h.table == self.table).then_some(n)
    }
}

fn independent_subset(vs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut kept: Vec<Vec<Rational>> = Vec::new();
    for v in vs {
        let mut trial = kept.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) == trial.len() {
            kept.push(v);
        }
    }
    kept
}

pub mod catalog {
    //! Built-in algebras.
    use super::*;

    /// `h_n`: `[X_j, X_{n+j}] = X_{2n+1}`, weights `(1,…,1,2)`.
    pub fn heisenberg(n: usize) -> GradedLieAlgebra {
        let mut w = vec![1; 2 * n];
        w.push(2);
        let entries = (0..n).map(|j| Bracket { i: j, j: n + j, k: 2 * n, c: Rational::one() }).collect();
        GradedLieAlgebra::new(&format!("heisenberg{n}"), w, entries)
    }

    /// `R^n`, all weights one.
    pub fn abelian(n: usize) -> GradedLieAlgebra {
        GradedLieAlgebra::new(&format!("abelian{n}"), vec![1; n], Vec::new())
    }

    /// Engel algebra: `[X1,X2]=X3`, `[X1,X3]=X4`, weights `(1,1,2,3)`.
    pub fn engel() -> GradedLieAlgebra {
        GradedLieAlgebra::new(
            "engel",
            vec![1, 1, 2, 3],
            vec![
                Bracket { i: 0, j: 1, k: 2, c: Rational::one() },
                Bracket { i: 0, j: 2, k: 3, c: Rational::one() },
            ],
        )
    }

    /// Free nilpotent algebra of rank 2 and step 3 (Hall basis):
    /// `[X1,X2]=X3`, `[X1,X3]=X4`, `[X2,X3]=X5`, weights `(1,1,2,3,3)`.
    pub fn free_nilpotent_2_3() -> GradedLieAlgebra {
        GradedLieAlgebra::new(
            "free23",
            vec![1, 1, 2, 3, 3],
            vec![
                Bracket { i: 0, j: 1, k: 2, c: Rational::one() },
                Bracket { i: 0, j: 2, k: 3, c: Rational::one() },
                Bracket { i: 1, j: 2, k: 4, c: Rational::one() },
            ],
        )
    }

    /// Looks up `heisenberg<n>`, `abelian<n>`, `engel`, `free23`.
    pub fn by_name(name: &str) -> Option<GradedLieAlgebra> {
        let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
        match name {
            "engel" => Some(engel()),
            "free23" | "free-nilpotent-2-3" => Some(free_nilpotent_2_3()),
            _ => num("heisenberg").map(heisenberg).or_else(|| num("abelian").map(abelian)),
        }
    }
}

/// Dynkin coefficients of `log(e^X e^Y)` grouped by word (false = X, true = Y),
/// for words of length at most `depth`.
pub fn dynkin_words(depth: usize) -> BTreeMap<Vec<bool>, Rational> {
    let mut out: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
    // blocks (r_i, s_i) with r_i + s_i >= 1, total length m
    fn rec(
        rest: usize,
        m: usize,
        blocks_so_far: &mut Vec<(usize, usize)>,
        out: &mut BTreeMap<Vec<bool>, Rational>,
    ) {
        if rest == 0 {
            let nb = blocks_so_far.len() as i64;
            let sign = if nb % 2 == 1 { 1 } else { -1 };
            let mut coeff = rat(sign, nb) * rat(1, m as i64);
            let mut word = Vec::with_capacity(m);
            for &(r, s) in blocks_so_far.iter() {
                coeff /= factorial(r as u32) * factorial(s as u32);
                word.extend(core::iter::repeat(false).take(r));
                word.extend(core::iter::repeat(true).take(s));
            }
            // right-nested brackets vanish when the last two letters agree
            if m >= 2 && word[m - 1] == word[m - 2] {
                return;
            }
            let slot = out.entry(word).or_insert_with(Rational::zero);
            *slot += coeff;
            return;
        }
        for len in 1..=rest {
            for r in 0..=len {
                blocks_so_far.push((r, len - r));
                rec(rest - len, m, blocks_so_far, out);
                blocks_so_far.pop();
            }
        }
    }
    for m in 1..=depth {
        rec(m, m, &mut Vec::new(), &mut out);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The group law `x·y = (R_1(x,y), …, R_n(x,y))` in blocks `x`, `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLaw {
    algebra: GradedLieAlgebra,
    r: Vec<Polynomial>,
}

impl GroupLaw {
    /// Exact BCH law via the Dynkin series truncated at the nilpotency step.
    pub fn bch(algebra: &GradedLieAlgebra) -> Result<GroupLaw> {
        let report = algebra.validate();
        if !report.passed() {
            return Err(Error::Violation(report.violations.iter().map(|v| v.to_string()).collect()));
        }
        let n = algebra.dim();
        let x = Polynomial::coords(blocks::X, n);
        let y = Polynomial::coords(blocks::Y, n);
        let r = bch_series(algebra, &x, &y, algebra.step());
        Ok(GroupLaw { algebra: algebra.clone(), r })
    }

    /// A law from explicit polynomials (no consistency checks).
    pub fn from_polynomials(algebra: &GradedLieAlgebra, r: Vec<Polynomial>) -> GroupLaw {
        GroupLaw { algebra: algebra.clone(), r }
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn weights(&self) -> &[u32] {
        self.algebra.weights()
    }

    /// `R_j`, 0-based.
    pub fn r(&self) -> &[Polynomial] {
        &self.r
    }

    /// `a·b` for symbolic points. Substitution is simultaneous, so `a` and
    /// `b` may themselves contain `x`/`y` variables.
    pub fn multiply(&self, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
        let n = self.dim();
        assert!(a.len() == n && b.len() == n, "group elements must have {n} coordinates");
        let mut bind = block_bindings(blocks::X, a);
        bind.extend(block_bindings(blocks::Y, b));
        self.r.iter().map(|rj| rj.substitute_partial(&bind)).collect()
    }

    pub fn try_multiply(&self, a: &[Polynomial], b: &[Polynomial]) -> Result<Vec<Polynomial>> {
        let n = self.dim();
        for len in [a.len(), b.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        Ok(self.multiply(a, b))
    }

    /// Product of several points, left to right.
    pub fn multiply_all(&self, points: &[&[Polynomial]]) -> Vec<Polynomial> {
        let mut acc = vec![Polynomial::zero(); self.dim()];
        for p in points {
            acc = self.multiply(&acc, p);
        }
        acc
    }

    /// Numeric product.
    pub fn multiply_rational(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let pa: Vec<Polynomial> = a.iter().cloned().map(Polynomial::constant).collect();
        let pb: Vec<Polynomial> = b.iter().cloned().map(Polynomial::constant).collect();
        self.multiply(&pa, &pb).iter().map(Polynomial::constant_term).collect()
    }

    /// `R(x, y)` evaluated in floating point.
    pub fn multiply_f64(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let val = |v: crate::poly::Var| -> f64 {
            let i = v.index as usize - 1;
            if v.block == blocks::X {
                a[i]
            } else {
                b[i]
            }
        };
        self.r.iter().map(|rj| rj.eval_f64(&val)).collect()
    }

    /// Inverse in first-kind coordinates: coordinate negation.
    pub fn inverse(&self, a: &[Polynomial]) -> Vec<Polynomial> {
        a.iter().map(|p| -p).collect()
    }

    /// `R(R(x,y),z) − R(x,R(y,z))`; all zero for an associative law.
    pub fn associativity_defect(&self) -> Vec<Polynomial> {
        let n = self.dim();
        let x = Polynomial::coords(blocks::X, n);
        let y = Polynomial::coords(blocks::Y, n);
        let z = Polynomial::coords(blocks::Z, n);
        let left = self.multiply(&self.multiply(&x, &y), &z);
        let right = self.multiply(&x, &self.multiply(&y, &z));
        left.iter().zip(&right).map(|(l, r)| l - r).collect()
    }

    /// `R_j(D_r x, D_r y) = r^{v_j} R_j(x, y)` with symbolic `r = r1`.
    pub fn check_homogeneity(&self) -> bool {
        let n = self.dim();
        let r = Polynomial::var_in(blocks::R, 1);
        let dx = dilate(self.weights(), &r, &Polynomial::coords(blocks::X, n));
        let dy = dilate(self.weights(), &r, &Polynomial::coords(blocks::Y, n));
        let lhs = self.multiply(&dx, &dy);
        lhs.iter().zip(&self.r).zip(self.weights()).all(|((l, rj), &v)| *l == &r.pow(v) * rj)
    }

    /// Every monomial of `R_j` uses only coordinates `1..=j`.
    pub fn is_triangular(&self) -> bool {
        self.r.iter().enumerate().all(|(j, rj)| rj.vars().iter().all(|v| v.index as usize <= j + 1))
    }

    /// Joint weight of `R_j` is `v_j` in the `(x, y)` grading.
    pub fn is_bihomogeneous(&self) -> bool {
        let w = self.weights();
        self.r.iter().zip(w).all(|(rj, &v)| rj.homogeneous_weight_in(w, &[blocks::X, blocks::Y]) == Homogeneity::Weight(v))
    }
}

/// `log(e^X e^Y)` with polynomial coordinates, truncated at word length `depth`.
pub fn bch_series(alg: &GradedLieAlgebra, x: &[Polynomial], y: &[Polynomial], depth: usize) -> Vec<Polynomial> {
    let n = alg.dim();
    let mut out = vec![Polynomial::zero(); n];
    for (word, c) in dynkin_words(depth) {
        let letter = |b: bool| if b { y } else { x };
        let m = word.len();
        let mut acc: Vec<Polynomial> = letter(word[m - 1]).to_vec();
        for &b in word[..m - 1].iter().rev() {
            acc = alg.bracket(letter(b), &acc);
            if acc.iter().all(Polynomial::is_zero) {
                break;
            }
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o += a.scale(&c);
        }
    }
    out
}

/// `D_r(x) = (r^{v_1} x_1, …, r^{v_n} x_n)` for symbolic or constant `r`.
pub fn dilate(weights: &[u32], r: &Polynomial, x: &[Polynomial]) -> Vec<Polynomial> {
    x.iter().zip(weights).map(|(xj, &v)| &r.pow(v) * xj).collect()
}

/// Homogeneous quasi-norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuasiNormKind {
    /// `max_j |x_j|^{1/v_j}`
    Inf,
    /// `(Σ |x_j|^{p/v_j})^{1/p}`, `p >= 1`
    P(f64),
    /// `((Σ_{j≤2n} x_j²)² + x_{2n+1}²/16)^{1/4}` on `H_n` only
    Koranyi,
}

/// Evaluates a quasi-norm on a numeric point.
pub fn quasi_norm(alg: &GradedLieAlgebra, x: &[f64], kind: QuasiNormKind) -> Result<f64> {
    let w = alg.weights();
    if x.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: x.len() });
    }
    Ok(match kind {
        QuasiNormKind::Inf => x.iter().zip(w).map(|(&xj, &v)| libm::pow(libm::fabs(xj), 1.0 / v as f64)).fold(0.0, f64::max),
        QuasiNormKind::P(p) => {
            if p < 1.0 {
                return Err(Error::KindUnsupported(format!("p = {p} < 1")));
            }
            let s: f64 = x.iter().zip(w).map(|(&xj, &v)| libm::pow(libm::fabs(xj), p / v as f64)).sum();
            libm::pow(s, 1.0 / p)
        }
        QuasiNormKind::Koranyi => {
            let Some(n) = alg.heisenberg_n() else {
                return Err(Error::KindUnsupported("Koranyi norm needs a Heisenberg group".into()));
            };
            let h: f64 = x[..2 * n].iter().map(|v| v * v).sum();
            let t = x[2 * n];
            libm::pow(h * h + t * t / 16.0, 0.25)
        }
    })
}

/// `max |xy| / (|x| + |y|)` over the supplied sample pairs: a sampled lower
/// estimate of the quasi-triangle constant, not a certified bound.
pub fn sampled_triangle_ratio(law: &GroupLaw, kind: QuasiNormKind, samples: &[(Vec<f64>, Vec<f64>)]) -> Result<f64> {
    let alg = law.algebra();
    let mut best: f64 = 0.0;
    for (a, b) in samples {
        let denom = quasi_norm(alg, a, kind)? + quasi_norm(alg, b, kind)?;
        if denom > 0.0 {
            best = best.max(quasi_norm(alg, &law.multiply_f64(a, b), kind)? / denom);
        }
    }
    Ok(best)
}

/// Sum of the displayed `H_n` law, used as a cross-check.
pub fn heisenberg_law_reference(n: usize) -> Vec<Polynomial> {
    let x = |j: usize| Polynomial::var_in(blocks::X, j as u32);
    let y = |j: usize| Polynomial::var_in(blocks::Y, j as u32);
    let mut r: Vec<Polynomial> = (1..=2 * n).map(|j| &x(j) + &y(j)).collect();
    let mut last = &x(2 * n + 1) + &y(2 * n + 1);
    for j in 1..=n {
        last += (&(&x(j) * &y(n + j)) - &(&x(n + j) * &y(j))).scale(&rat(1, 2));
    }
    r.push(last);
    r
}

/// Convenience: block coordinate vector.
pub fn coords(block: Block, n: usize) -> Vec<Polynomial> {
    Polynomial::coords(block, n)
}

/// Convenience: numeric point as constant polynomials.
pub fn point(values: &[Rational]) -> Vec<Polynomial> {
    values.iter().cloned().map(Polynomial::constant).collect()
}
