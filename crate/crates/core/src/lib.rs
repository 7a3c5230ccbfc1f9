//! Exact symbolic engine for τ-quantizations on graded nilpotent Lie groups.
//!
//! Everything here is exact rational arithmetic and runs without `std`
//! (only `alloc`). The layers build on each other:
//!
//! - [`poly`]: rationals, multi-indices, block-tagged polynomials
//! - [`group`]: graded Lie algebras, BCH group laws, dilations, quasi-norms
//! - [`invariant`]: invariant vector fields, canonical polynomials `q_α`,
//!   conversion polynomials, Taylor polynomials
//! - [`tau`]: quantizing functions, expansion coefficient tables, automorphisms
//! - [`expansion`]: formal asymptotic expansions `ω_j`
#![no_std]

extern crate alloc;

pub mod error;
pub mod expansion;
pub mod group;
pub mod invariant;
pub mod linalg;
pub mod tau;
pub mod poly;

pub use error::{Error, Result};
pub use poly::{Block, Homogeneity, Monomial, MultiIndex, Polynomial, Rational, Var};
