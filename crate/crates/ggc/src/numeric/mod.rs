//! Floating-point oracles on a periodic grid.
//!
//! Operators are dense `N × N` complex matrices acting on samples at
//! `x_a = -L/2 + a h`. The discrete inner product is `h Σ f_a conj(g_a)`, so
//! the adjoint of a matrix is its conjugate transpose.

mod heisenberg;
mod symbol;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

pub use heisenberg::{fd_step, h1_mul, SAMPLES, metaplectic_check, metaplectic_op, rep_checks, schrodinger_rep, sublaplacian_symbol_check, MetaplecticKind};
pub use symbol::{
    adjoint_check, bind_expansion, delta_x_operators, moyal_exactness_check, quantize_tau_rn, terminating_order, CPoly, EuclidSymbol,
};

pub type C64 = Complex64;

/// Default tolerance for identities that hold exactly up to rounding.
pub const TOL_EXACT: f64 = 1e-8;
/// Default tolerance for finite-difference limited checks.
pub const TOL_FD: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("grid size {0} is not a power of two")]
    GridSize(usize),
    #[error("period must be positive, got {0}")]
    Period(f64),
    #[error("symbol has no polynomial form")]
    NeedsPolynomial,
    #[error("shift {shift} exceeds a quarter period {limit}")]
    ShiftOutOfRange { shift: f64, limit: f64 },
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("dilation parameter must be nonzero")]
    ZeroDilation,
    #[error("expansion is not one-dimensional")]
    NotOneDimensional,
    #[error(transparent)]
    Core(#[from] ggc_core::Error),
}

pub type Result<T> = std::result::Result<T, NumericError>;

/// `N` samples over one period `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub period: f64,
}

impl Grid {
    pub fn new(n: usize, period: f64) -> Result<Grid> {
        if n < 2 || !n.is_power_of_two() {
            return Err(NumericError::GridSize(n));
        }
        if period.is_nan() || period <= 0.0 {
            return Err(NumericError::Period(period));
        }
        Ok(Grid { n, period })
    }

    /// The grid used by the acceptance checks: `N = 128`, `L = 16π`.
    pub fn standard() -> Grid {
        Grid { n: 128, period: 16.0 * PI }
    }

    pub fn h(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.n).map(|a| -self.period / 2.0 + a as f64 * self.h()).collect()
    }

    /// Largest resolved frequency `π / h`.
    pub fn xi_max(&self) -> f64 {
        PI / self.h()
    }

    /// Symmetric frequency grid `ξ_k = 2πk/L`, `k = -N/2..=N/2`, with the
    /// Nyquist pair carrying weight 1/2 each.
    pub fn xi_weighted(&self) -> Vec<(f64, f64)> {
        let half = self.n as i64 / 2;
        (-half..=half)
            .map(|k| {
                let w = if k.abs() == half { 0.5 } else { 1.0 };
                (2.0 * PI * k as f64 / self.period, w)
            })
            .collect()
    }

    /// Frequency of FFT bin `k` (natural FFT order); the Nyquist bin is
    /// reported as `+π/h`.
    fn fft_xi(&self, k: usize) -> f64 {
        let n = self.n as i64;
        let k = k as i64;
        let s = if k > n / 2 { k - n } else { k };
        2.0 * PI * s as f64 / self.period
    }
}

/// Dense operator on grid samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOperator(pub Array2<C64>);

impl GridOperator {
    pub fn identity(n: usize) -> Self {
        GridOperator(Array2::from_diag_elem(n, C64::new(1.0, 0.0)))
    }

    pub fn diagonal(d: &[C64]) -> Self {
        GridOperator(Array2::from_diag(&Array1::from_vec(d.to_vec())))
    }

    pub fn adjoint(&self) -> Self {
        GridOperator(self.0.t().mapv(|z| z.conj()))
    }

    pub fn dot(&self, other: &GridOperator) -> GridOperator {
        GridOperator(self.0.dot(&other.0))
    }

    pub fn apply(&self, v: &Array2<C64>) -> Array2<C64> {
        self.0.dot(v)
    }

    pub fn scale(&self, c: C64) -> GridOperator {
        GridOperator(self.0.mapv(|z| z * c))
    }

    pub fn add(&self, other: &GridOperator) -> GridOperator {
        GridOperator(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &GridOperator) -> GridOperator {
        GridOperator(&self.0 - &other.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `F⁻¹ diag(m(ξ)) F` built column by column with FFTs. The Nyquist bin uses
/// the mean of `m(±π/h)` so that real even/odd multipliers stay real/odd.
pub fn fourier_multiplier(grid: &Grid, m: impl Fn(f64) -> C64) -> GridOperator {
    let n = grid.n;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let nyq = grid.xi_max();
    let mult: Vec<C64> = (0..n)
        .map(|k| if k == n / 2 { (m(nyq) + m(-nyq)) * 0.5 } else { m(grid.fft_xi(k)) })
        .collect();
    // The grid starts at -L/2, not 0; a pure multiplier is shift-invariant so
    // the offset cancels.
    let mut out = Array2::zeros((n, n));
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for col in 0..n {
        buf.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        buf[col] = C64::new(1.0, 0.0);
        fwd.process(&mut buf);
        for (z, w) in buf.iter_mut().zip(&mult) {
            *z *= w;
        }
        inv.process(&mut buf);
        for (row, z) in buf.iter().enumerate() {
            out[[row, col]] = z / n as f64;
        }
    }
    GridOperator(out)
}

/// Spectral derivative `∂`.
pub fn derivative(grid: &Grid) -> GridOperator {
    fourier_multiplier(grid, |xi| C64::new(0.0, xi))
}

/// Multiplication by the coordinate `u`.
pub fn coordinate(grid: &Grid) -> GridOperator {
    GridOperator::diagonal(&grid.x().iter().map(|&u| C64::new(u, 0.0)).collect::<Vec<_>>())
}

/// Translation `f ↦ f(· + s)` by a Fourier phase ramp.
pub fn translation(grid: &Grid, s: f64) -> GridOperator {
    fourier_multiplier(grid, |xi| C64::from_polar(1.0, xi * s))
}

/// Gaussian-concentrated test vectors `exp(-(u-c)²/2 + i ω u)` as columns.
pub fn test_vectors(grid: &Grid, centers: &[f64], mods: &[f64]) -> Array2<C64> {
    let x = grid.x();
    let cols: Vec<(f64, f64)> = centers.iter().flat_map(|&c| mods.iter().map(move |&w| (c, w))).collect();
    let mut g = Array2::zeros((grid.n, cols.len()));
    for (j, (c, w)) in cols.iter().enumerate() {
        for (a, &u) in x.iter().enumerate() {
            g[[a, j]] = C64::from_polar((-(u - c) * (u - c) / 2.0).exp(), w * u);
        }
    }
    g
}

/// The default test block: centres `{-1.5, 0, 1.5}`, modulations `{0, 1/2}`.
/// Their spectral mass at the Nyquist frequency is of order `1e-12`.
pub fn default_test_vectors(grid: &Grid) -> Array2<C64> {
    test_vectors(grid, &[-1.5, 0.0, 1.5], &[0.0, 0.5])
}

pub fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖_F / max(‖a‖_F, ‖b‖_F)`; zero when both vanish.
pub fn relative_residual(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let d = frobenius(&(a - b));
    let s = frobenius(a).max(frobenius(b));
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Column norms times `sqrt(h)`.
pub fn l2_norms(grid: &Grid, v: &Array2<C64>) -> Vec<f64> {
    v.axis_iter(Axis(1)).map(|c| (c.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.h()).sqrt()).collect()
}

/// Whether the residual must stay below or above the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Max,
    Min,
}

/// One numeric check outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub grid: usize,
    pub params: BTreeMap<String, String>,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub advisories: Vec<String>,
}

impl ResidualReport {
    pub fn new(check: &str, grid: &Grid, residual: f64, tolerance: f64, bound: Bound) -> Self {
        ResidualReport {
            check: check.into(),
            grid: grid.n,
            params: BTreeMap::new(),
            residual,
            tolerance,
            bound,
            advisories: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn pass(&self) -> bool {
        match self.bound {
            Bound::Max => self.residual <= self.tolerance,
            Bound::Min => self.residual >= self.tolerance,
        }
    }
}

/// A symbol given by a closure, for non-polynomial inputs.
pub fn func_symbol(f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static) -> EuclidSymbol {
    EuclidSymbol::Func(Arc::new(f))
}
