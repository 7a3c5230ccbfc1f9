//! Exact Gaussian elimination over the rationals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};

/// Solves `A X = B` for `X` (k × r) where `A` is m × k with full column rank.
///
/// Rows of `A` may outnumber columns; extra equations must be consistent.
pub fn solve_multi(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let r = b.first().map_or(0, Vec::len);
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b.len() });
    }
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            let mut row = ra.clone();
            row.extend(rb.iter().cloned());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(p) = (pivot_row..m).find(|&i| !rows[i][col].is_zero()) else {
            return Err(Error::SingularSystem(format!("no pivot in column {col}")));
        };
        rows.swap(pivot_row, p);
        let inv = Rational::one() / rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&prow).skip(col) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivot_row += 1;
    }
    for row in rows.iter().skip(k) {
        if row[k..].iter().any(|v| !v.is_zero()) {
            return Err(Error::SingularSystem("inconsistent overdetermined system".into()));
        }
    }
    Ok((0..k).map(|i| rows[i][k..k + r].to_vec()).collect())
}

/// Solves `A x = b`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let bm: Vec<Vec<Rational>> = b.iter().map(|v| alloc::vec![v.clone()]).collect();
    Ok(solve_multi(a, &bm)?.into_iter().map(|mut v| v.remove(0)).collect())
}

/// Rank of a matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let m = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let prow = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone() / prow[col].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        r += 1;
    }
    r
}

/// Coefficients `c` with `target = Σ c_i basis_i`, if the basis is linearly
/// independent and the target lies in its span.
pub fn express_in_span(target: &Polynomial, basis: &[Polynomial]) -> Result<Vec<Rational>> {
    if basis.is_empty() {
        return if target.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::BasisDeficient("empty basis, nonzero target".into()))
        };
    }
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in basis.iter().chain(core::iter::once(target)) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let rows = index.len();
    let mut a = alloc::vec![alloc::vec![Rational::zero(); basis.len()]; rows];
    let mut b = alloc::vec![Rational::zero(); rows];
    for (j, p) in basis.iter().enumerate() {
        for (m, c) in p.terms() {
            a[index[m]][j] = c.clone();
        }
    }
    for (m, c) in target.terms() {
        b[index[m]] = c.clone();
    }
    solve(&a, &b).map_err(|e| match e {
        Error::SingularSystem(msg) => Error::BasisDeficient(msg),
        other => other,
    })
}
