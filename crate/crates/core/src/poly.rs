//! Exact rationals, multi-indices and sparse multivariate polynomials whose
//! variables are `(block, index)` pairs such as `x3` or `y1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a [`Rational`].
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional leading sign).
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: alloc::format!("bad rational '{s}'") };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() || d.is_negative() || den.starts_with('+') {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as `"p/q"`, or `"p"` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Short lowercase block tag (`x`, `y`, `z`, ...), at most 8 ASCII letters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block([u8; 8]);

impl Block {
    /// Compile-time constructor; panics on an invalid tag.
    pub const fn lit(tag: &str) -> Block {
        let b = tag.as_bytes();
        assert!(!b.is_empty() && b.len() <= 8, "block tag must have 1..=8 letters");
        let mut out = [0u8; 8];
        let mut i = 0;
        while i < b.len() {
            assert!(b[i].is_ascii_lowercase(), "block tag must be lowercase ascii");
            out[i] = b[i];
            i += 1;
        }
        Block(out)
    }

    pub fn new(tag: &str) -> Result<Block, Error> {
        if tag.is_empty() || tag.len() > 8 || !tag.bytes().all(|c| c.is_ascii_lowercase()) {
            return Err(Error::BadBlockTag(tag.to_string()));
        }
        Ok(Block::lit(tag))
    }

    pub fn as_str(&self) -> &str {
        let len = self.0.iter().position(|&c| c == 0).unwrap_or(8);
        core::str::from_utf8(&self.0[..len]).unwrap_or("?")
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub mod blocks {
    //! The block tags used throughout the crate.
    use super::Block;
    pub const X: Block = Block::lit("x");
    pub const Y: Block = Block::lit("y");
    pub const Z: Block = Block::lit("z");
    pub const W: Block = Block::lit("w");
    pub const S: Block = Block::lit("s");
    /// Parameter block for conjugating elements.
    pub const A: Block = Block::lit("a");
    /// Parameter block for a symbolic dilation factor (`r1`).
    pub const R: Block = Block::lit("r");
}

/// A variable: block tag plus 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub block: Block,
    pub index: u32,
}

impl Var {
    pub const fn new(block: Block, index: u32) -> Var {
        Var { block, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.block, self.index)
    }
}

/// Exponent vector `α ∈ N_0^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// Unit index `e_j`, `j` 0-based.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Isotropic length `|α|`.
    pub fn abs(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weighted degree `[α] = Σ v_j α_j`.
    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(a, v)| a * v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α!` as a rational.
    pub fn factorial(&self) -> Rational {
        self.0.iter().fold(Rational::one(), |acc, &a| acc * factorial(a))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Product of binomial coefficients `Π C(α_j, β_j)`.
    pub fn binomial(&self, beta: &MultiIndex) -> Rational {
        let mut acc = Rational::one();
        for (&a, &b) in self.0.iter().zip(&beta.0) {
            acc *= factorial(a) / (factorial(b) * factorial(a - b));
        }
        acc
    }

    /// All `β <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::new())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for k in 0..=a {
                    let mut p = prefix.0.clone();
                    p.push(k);
                    next.push(MultiIndex(p));
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    /// `e1`, `2e1+e3`, `0` for the zero index.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if a > 1 {
                write!(f, "{a}")?;
            }
            write!(f, "e{}", j + 1)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// All `γ ∈ N_0^n` with `[γ] = m`, in descending lexicographic order.
pub fn monomials_of_weight(weights: &[u32], m: u32) -> Vec<MultiIndex> {
    fn rec(weights: &[u32], rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let j = prefix.len();
        if j == weights.len() {
            if rest == 0 {
                out.push(MultiIndex(prefix.clone()));
            }
            return;
        }
        let v = weights[j];
        for a in (0..=rest / v).rev() {
            prefix.push(a);
            rec(weights, rest - a * v, prefix, out);
            prefix.pop();
        }
    }
    assert!(weights.iter().all(|&v| v > 0), "weights must be positive");
    let mut out = Vec::new();
    rec(weights, m, &mut Vec::new(), &mut out);
    out
}

/// All `γ` with `[γ] <= m`, grouped by increasing weight.
pub fn monomials_up_to_weight(weights: &[u32], m: u32) -> Vec<MultiIndex> {
    (0..=m).flat_map(|k| monomials_of_weight(weights, k)).collect()
}

/// A monomial: sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// `block^α`.
    pub fn from_index(block: Block, alpha: &MultiIndex) -> Self {
        Monomial(
            alpha
                .0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(j, &a)| (Var::new(block, j as u32 + 1), a))
                .collect(),
        )
    }

    /// Builds from arbitrary `(var, exp)` pairs, merging duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    /// Exponent vector of one block (length `n`).
    pub fn index_in(&self, block: Block, n: usize) -> MultiIndex {
        let mut out = vec![0; n];
        for &(v, e) in &self.0 {
            if v.block == block && (v.index as usize) <= n && v.index > 0 {
                out[v.index as usize - 1] = e;
            }
        }
        MultiIndex(out)
    }

    /// The part of the monomial in the given block.
    pub fn restrict(&self, block: Block) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(v, _)| v.block == block).collect())
    }

    pub fn has_block(&self, block: Block) -> bool {
        self.0.iter().any(|(v, _)| v.block == block)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Weighted degree, counting every variable `v` as `weights[v.index-1]`.
    /// Variables outside `blocks` (when given) count zero.
    fn weighted_degree(&self, weights: &[u32], blocks: Option<&[Block]>) -> Option<u32> {
        let mut w = 0;
        for &(v, e) in &self.0 {
            if blocks.is_some_and(|bs| !bs.contains(&v.block)) {
                continue;
            }
            let vj = *weights.get(v.index as usize - 1)?;
            w += vj * e;
        }
        Some(w)
    }
}

impl Ord for Monomial {
    /// Total degree first, then lexicographic in the variables with higher
    /// powers of earlier variables first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                match a.0.cmp(&b.0) {
                    Ordering::Equal => match b.1.cmp(&a.1) {
                        Ordering::Equal => continue,
                        o => return o,
                    },
                    o => return o,
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Result of a homogeneity query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    /// The zero polynomial: homogeneous of every weight.
    Zero,
    Weight(u32),
    NonHomogeneous,
}

impl Homogeneity {
    /// True if compatible with weight `m` (zero is compatible with everything).
    pub fn allows(self, m: u32) -> bool {
        match self {
            Homogeneity::Zero => true,
            Homogeneity::Weight(w) => w == m,
            Homogeneity::NonHomogeneous => false,
        }
    }
}

/// Sparse polynomial with exact rational coefficients. Never stores zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), Rational::one())
    }

    /// The variable `block_j`, `j` 1-based.
    pub fn var_in(block: Block, j: u32) -> Self {
        Polynomial::var(Var::new(block, j))
    }

    /// `c · block^α`.
    pub fn monomial(block: Block, alpha: &MultiIndex, c: Rational) -> Self {
        Polynomial::term(Monomial::from_index(block, alpha), c)
    }

    /// The coordinate vector `(block_1, …, block_n)`.
    pub fn coords(block: Block, n: usize) -> Vec<Polynomial> {
        (1..=n as u32).map(|j| Polynomial::var_in(block, j)).collect()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Multiplies by a monomial with coefficient.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect()
    }

    pub fn has_block(&self, block: Block) -> bool {
        self.terms.keys().any(|m| m.has_block(block))
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let rest = Monomial(
                m.0.iter()
                    .filter_map(|&(w, k)| if w == v { (k > 1).then_some((w, k - 1)) } else { Some((w, k)) })
                    .collect(),
            );
            out.add_term(rest, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// `∂^α` in the given block.
    pub fn derivative_index(&self, block: Block, alpha: &MultiIndex) -> Polynomial {
        let mut p = self.clone();
        for (j, &a) in alpha.0.iter().enumerate() {
            for _ in 0..a {
                if p.is_zero() {
                    return p;
                }
                p = p.derivative(Var::new(block, j as u32 + 1));
            }
        }
        p
    }

    /// Substitutes every variable; errors if one is unbound.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Polynomial>) -> Result<Polynomial, Error> {
        for v in self.vars() {
            if !bindings.contains_key(&v) {
                return Err(Error::UnboundVariable(v.to_string()));
            }
        }
        Ok(self.substitute_partial(bindings))
    }

    /// Substitutes bound variables, leaving the rest untouched.
    pub fn substitute_partial(&self, bindings: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::one();
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match bindings.get(&v) {
                    Some(b) => {
                        let pw = cache.entry((v, e)).or_insert_with(|| b.pow(e));
                        prod = &prod * pw;
                    }
                    None => kept.push((v, e)),
                }
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            let kept = Monomial(kept);
            for (pm, pc) in prod.terms {
                out.add_term(pm.mul(&kept), pc * c);
            }
        }
        out
    }

    /// Substitutes `block_j ↦ values[j-1]`.
    pub fn substitute_block(&self, block: Block, values: &[Polynomial]) -> Polynomial {
        self.substitute_partial(&block_bindings(block, values))
    }

    /// Renames every variable of block `from` to block `to`.
    pub fn rename_block(&self, from: Block, to: Block) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let nm = Monomial::from_pairs(
                m.0.iter().map(|&(v, e)| (if v.block == from { Var::new(to, v.index) } else { v }, e)),
            );
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Sets every variable of `block` to zero.
    pub fn at_zero(&self, block: Block) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().filter(|(m, _)| !m.has_block(block)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Homogeneity with every variable `v` weighted by `weights[v.index-1]`.
    pub fn homogeneous_weight(&self, weights: &[u32]) -> Homogeneity {
        self.weight_impl(weights, None)
    }

    /// Homogeneity counting only variables of the listed blocks.
    pub fn homogeneous_weight_in(&self, weights: &[u32], blocks: &[Block]) -> Homogeneity {
        self.weight_impl(weights, Some(blocks))
    }

    fn weight_impl(&self, weights: &[u32], blocks: Option<&[Block]>) -> Homogeneity {
        let mut found = None;
        for m in self.terms.keys() {
            let Some(w) = m.weighted_degree(weights, blocks) else {
                return Homogeneity::NonHomogeneous;
            };
            match found {
                None => found = Some(w),
                Some(f) if f != w => return Homogeneity::NonHomogeneous,
                _ => {}
            }
        }
        found.map_or(Homogeneity::Zero, Homogeneity::Weight)
    }

    /// Floating point evaluation.
    pub fn eval_f64(&self, value: &dyn Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let cf = c.to_f64().unwrap_or(f64::NAN);
                m.0.iter().fold(cf, |acc, &(v, e)| acc * libm::pow(value(v), e as f64))
            })
            .sum()
    }

    /// Renders with terms sorted by weighted degree first (weights indexed
    /// by variable index), then by the internal order.
    pub fn display_graded(&self, weights: &[u32]) -> String {
        let mut items: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| m.weighted_degree(weights, None).unwrap_or(u32::MAX));
        render_terms(&items)
    }
}

/// `{block_j ↦ values[j-1]}`.
pub fn block_bindings(block: Block, values: &[Polynomial]) -> BTreeMap<Var, Polynomial> {
    values.iter().enumerate().map(|(j, p)| (Var::new(block, j as u32 + 1), p.clone())).collect()
}

fn render_terms(items: &[(&Monomial, &Rational)]) -> String {
    if items.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in items.iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            s.push_str(&fmt_rational(&a));
        } else {
            if !a.is_one() {
                s.push_str(&fmt_rational(&a));
                s.push(' ');
            }
            s.push_str(&m.to_string());
        }
    }
    s
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<_> = self.terms.iter().collect();
        f.write_str(&render_terms(&items))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Grammar: `expr = term (("+"|"-") term)*`, `term = rational? (var ("^" uint)?)*`.
    fn from_str(s: &str) -> Result<Self, Error> {
        Parser { src: s.as_bytes(), pos: 0 }.expression()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, Error> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| core::str::from_utf8(&self.src[start..self.pos]).unwrap_or(""))
    }

    fn expression(&mut self) -> Result<Polynomial, Error> {
        let mut out = Polynomial::zero();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return self.err("empty expression"),
            _ => {}
        }
        loop {
            let t = self.term()?;
            out += t.scale(&sign);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    sign = Rational::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -Rational::one();
                    self.pos += 1;
                }
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, Error> {
        let mut coeff = Rational::one();
        let mut pairs = Vec::new();
        let mut seen = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num: BigInt = self.digits().unwrap_or("0").parse().map_err(|_| Error::Parse {
                pos: self.pos,
                msg: "bad integer".to_string(),
            })?;
            let mut den = BigInt::one();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                den = match self.digits() {
                    Some(d) => d.parse().map_err(|_| Error::Parse { pos: self.pos, msg: "bad denominator".into() })?,
                    None => return self.err("expected denominator"),
                };
                if den.is_zero() {
                    return self.err("zero denominator");
                }
            }
            coeff = BigRational::new(num, den);
            seen = true;
        }
        loop {
            match self.peek() {
                Some(b'*') if seen => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_lowercase() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
                        self.pos += 1;
                    }
                    let tag = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                    let block = Block::new(tag).map_err(|_| Error::Parse { pos: start, msg: "bad block tag".into() })?;
                    let idx = match self.digits() {
                        Some(d) => d.parse::<u32>().map_err(|_| Error::Parse { pos: start, msg: "bad index".into() })?,
                        None => return self.err("expected variable index"),
                    };
                    if idx == 0 {
                        return self.err("variable indices are 1-based");
                    }
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = match self.digits() {
                            Some(d) => d.parse::<u32>().map_err(|_| Error::Parse { pos: self.pos, msg: "bad exponent".into() })?,
                            None => return self.err("expected exponent"),
                        };
                    }
                    pairs.push((Var::new(block, idx), e));
                    seen = true;
                }
                _ => break,
            }
        }
        if !seen {
            return self.err("expected term");
        }
        Ok(Polynomial::term(Monomial::from_pairs(pairs), coeff))
    }
}
