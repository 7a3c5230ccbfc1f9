//! Schrödinger representation of `H_1` and metaplectic operators on a grid.

use std::f64::consts::PI;

use ndarray::Array2;

use super::{
    coordinate, fourier_multiplier, relative_residual, test_vectors, translation, Bound, Grid, GridOperator, NumericError, ResidualReport,
    Result, C64, TOL_EXACT, TOL_FD,
};

/// Principal square root of `λ` as a complex number.
fn sqrt_lambda(lambda: f64) -> C64 {
    C64::new(lambda, 0.0).sqrt()
}

/// `H_1` product in exponential coordinates.
pub fn h1_mul(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0])]
}

/// `π_λ(x) h(u) = e^{iλ(x3 + x1 x2 / 2)} e^{i√λ x2 u} h(u + √|λ| x1)`.
///
/// For `λ < 0` the principal root makes the modulation real-exponential; the
/// operator is then not unitary. That branch is kept literal and unverified.
pub fn schrodinger_rep(grid: &Grid, lambda: f64, x: [f64; 3]) -> Result<GridOperator> {
    if lambda == 0.0 {
        return Err(NumericError::ZeroLambda);
    }
    let shift = lambda.abs().sqrt() * x[0];
    let limit = grid.period / 4.0;
    if shift.abs() > limit {
        return Err(NumericError::ShiftOutOfRange { shift, limit });
    }
    let phase = C64::new(0.0, lambda * (x[2] + 0.5 * x[0] * x[1])).exp();
    let s = sqrt_lambda(lambda);
    let m: Vec<C64> = grid.x().iter().map(|&u| (C64::i() * s * x[1] * u).exp() * phase).collect();
    let t = translation(grid, shift);
    let mut out = t.0;
    for (mut row, f) in out.rows_mut().into_iter().zip(&m) {
        row.mapv_inplace(|z| z * f);
    }
    Ok(GridOperator(out))
}

/// Unmodulated Gaussians centred in the middle of the period.
fn rep_vectors(grid: &Grid) -> Array2<C64> {
    test_vectors(grid, &[-1.0, 0.0, 1.0], &[0.0])
}

/// Sample points used by [`rep_checks`] and [`metaplectic_check`].
pub const SAMPLES: [[f64; 3]; 4] = [[0.3, -0.2, 0.1], [-0.45, 0.15, -0.3], [0.1, 0.5, 0.25], [-0.2, -0.35, 0.4]];

/// Homomorphism, central character, unitarity and `π_λ(X_3) = iλ`.
pub fn rep_checks(grid: &Grid, lambda: f64, samples: &[[f64; 3]]) -> Result<Vec<ResidualReport>> {
    let g = rep_vectors(grid);
    let mut hom: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let px = schrodinger_rep(grid, lambda, x)?;
        let lhs = px.apply(&g);
        let un = super::l2_norms(grid, &lhs);
        let gn = super::l2_norms(grid, &g);
        unit = un.iter().zip(&gn).map(|(a, b)| (a - b).abs() / b).fold(unit, f64::max);
        for &y in &samples[i..] {
            let py = schrodinger_rep(grid, lambda, y)?;
            let pxy = schrodinger_rep(grid, lambda, h1_mul(x, y))?;
            hom = hom.max(relative_residual(&px.apply(&py.apply(&g)), &pxy.apply(&g)));
        }
    }

    let t = 0.7;
    let pc = schrodinger_rep(grid, lambda, [0.0, 0.0, t])?;
    let want = GridOperator::identity(grid.n).scale(C64::new(0.0, lambda * t).exp());
    let central = relative_residual(&pc.0, &want.0);

    let eps = 1e-4;
    let plus = schrodinger_rep(grid, lambda, [0.0, 0.0, eps])?;
    let minus = schrodinger_rep(grid, lambda, [0.0, 0.0, -eps])?;
    let x3 = plus.sub(&minus).scale(C64::new(0.5 / eps, 0.0));
    let x3_res = relative_residual(&x3.0, &GridOperator::identity(grid.n).scale(C64::new(0.0, lambda)).0);

    let mk = |name: &str, r: f64, tol: f64| sign_note(ResidualReport::new(name, grid, r, tol, Bound::Max).param("lambda", lambda), lambda);
    Ok(vec![
        mk("homomorphism", hom, TOL_EXACT),
        mk("central-character", central, 1e-10),
        mk("unitarity", unit, TOL_EXACT),
        mk("x3-generator", x3_res, TOL_FD),
    ])
}

/// Fourth-order second difference of `t ↦ π_λ(exp(t X_j))` at `t = 0`.
fn second_derivative(grid: &Grid, lambda: f64, j: usize, eps: f64) -> Result<GridOperator> {
    let at = |t: f64| {
        let mut x = [0.0; 3];
        x[j] = t;
        schrodinger_rep(grid, lambda, x)
    };
    let c = |k: f64| C64::new(k / (12.0 * eps * eps), 0.0);
    Ok(at(2.0 * eps)?
        .scale(c(-1.0))
        .add(&at(eps)?.scale(c(16.0)))
        .add(&GridOperator::identity(grid.n).scale(c(-30.0)))
        .add(&at(-eps)?.scale(c(16.0)))
        .add(&at(-2.0 * eps)?.scale(c(-1.0))))
}

/// Step for the second differences. It is tied to the grid spacing so that
/// refining the grid also shrinks the truncation error, and scaled by
/// `√|λ|` so the shift `√|λ| ε` stays fixed.
pub fn fd_step(grid: &Grid, lambda: f64) -> f64 {
    grid.h() / (20.0 * lambda.abs().sqrt().max(1.0))
}

/// `π_λ(X_1)² + π_λ(X_2)²` from finite differences against `|λ|(D² − U²)`,
/// compared on Gaussian test vectors.
pub fn sublaplacian_symbol_check(grid: &Grid, lambda: f64) -> Result<ResidualReport> {
    if lambda == 0.0 {
        return Err(NumericError::ZeroLambda);
    }
    let eps = fd_step(grid, lambda);
    let l = second_derivative(grid, lambda, 0, eps)?.add(&second_derivative(grid, lambda, 1, eps)?);
    let d2 = fourier_multiplier(grid, |xi| C64::new(-xi * xi, 0.0));
    let u = coordinate(grid);
    let h = d2.sub(&u.dot(&u)).scale(C64::new(lambda.abs(), 0.0));
    let g = rep_vectors(grid);
    let r = relative_residual(&l.apply(&g), &h.apply(&g));
    Ok(sign_note(ResidualReport::new("sublaplacian", grid, r, TOL_FD, Bound::Max).param("lambda", lambda).param("eps", eps), lambda))
}

/// The branch of the square root for `λ < 0` is a guess; say so.
fn sign_note(mut r: ResidualReport, lambda: f64) -> ResidualReport {
    if lambda < 0.0 {
        r.advisories.push("NEGATIVE_LAMBDA_UNVERIFIED".to_string());
    }
    r
}

/// Generators of the metaplectic action on `H_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetaplecticKind {
    /// `S̃x = (a x1, x2/a, x3)`, `η h(u) = a^{-1/2} h(u/a)`.
    Dilation(f64),
    /// `S̃x = (x1, c x1 + x2, x3)`, `η h(u) = e^{-icu²/2} h(u)`.
    Chirp(f64),
    /// `S̃x = (x2, -x1, x3)`, `η h(ξ) = (2π)^{-1/2} ∫ h(u) e^{iuξ} du`.
    J,
}

impl MetaplecticKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetaplecticKind::Dilation(_) => "dilation",
            MetaplecticKind::Chirp(_) => "chirp",
            MetaplecticKind::J => "J",
        }
    }

    pub fn act(&self, x: [f64; 3]) -> [f64; 3] {
        match *self {
            MetaplecticKind::Dilation(a) => [a * x[0], x[1] / a, x[2]],
            MetaplecticKind::Chirp(c) => [x[0], c * x[0] + x[1], x[2]],
            MetaplecticKind::J => [x[1], -x[0], x[2]],
        }
    }
}

/// Trigonometric interpolation matrix onto the points `y`; points outside the
/// period map to zero.
fn resample(grid: &Grid, y: &[f64]) -> GridOperator {
    let x = grid.x();
    let xi = grid.xi_weighted();
    let n = grid.n;
    let mut m = Array2::zeros((y.len(), n));
    for (a, &p) in y.iter().enumerate() {
        if p.abs() > grid.period / 2.0 {
            continue;
        }
        for b in 0..n {
            let d = p - x[b];
            let s: C64 = xi.iter().map(|&(f, w)| C64::from_polar(w, f * d)).sum();
            m[[a, b]] = s / n as f64;
        }
    }
    GridOperator(m)
}

/// `η_λ(S)` and its inverse on the grid.
pub fn metaplectic_op(grid: &Grid, lambda: f64, kind: MetaplecticKind) -> Result<(GridOperator, GridOperator, Vec<String>)> {
    if lambda == 0.0 {
        return Err(NumericError::ZeroLambda);
    }
    let x = grid.x();
    let mut adv = Vec::new();
    match kind {
        MetaplecticKind::Dilation(a) => {
            if a == 0.0 {
                return Err(NumericError::ZeroDilation);
            }
            if a.abs().max(1.0 / a.abs()) > 1.5 {
                adv.push("RESAMPLING_LOSS".to_string());
            }
            let dil = |a: f64| {
                let y: Vec<f64> = x.iter().map(|u| u / a).collect();
                resample(grid, &y).scale(C64::new(a.abs().powf(-0.5), 0.0))
            };
            Ok((dil(a), dil(1.0 / a), adv))
        }
        MetaplecticKind::Chirp(c) => {
            let d = |s: f64| GridOperator::diagonal(&x.iter().map(|u| C64::from_polar(1.0, s * c * u * u / 2.0)).collect::<Vec<_>>());
            Ok((d(-1.0), d(1.0), adv))
        }
        MetaplecticKind::J => {
            // Quadrature of the Fourier integral, restricted on both sides to
            // |u| ≤ π/h where the sampled exponential is not aliased.
            let s = sqrt_lambda(lambda);
            let cut = grid.xi_max();
            let k = grid.h() / (2.0 * PI).sqrt();
            let mut m = Array2::zeros((grid.n, grid.n));
            for (a, &ua) in x.iter().enumerate() {
                for (b, &ub) in x.iter().enumerate() {
                    if ua.abs() <= cut && ub.abs() <= cut {
                        m[[a, b]] = (C64::i() * s * ua * ub).exp() * k;
                    }
                }
            }
            let op = GridOperator(m);
            let inv = op.adjoint();
            Ok((op, inv, adv))
        }
    }
}

/// `max_x ‖π_λ(S̃x) − η π_λ(x) η⁻¹‖` over [`SAMPLES`], on Gaussian test vectors.
pub fn metaplectic_check(grid: &Grid, lambda: f64, kind: MetaplecticKind) -> Result<ResidualReport> {
    let (eta, eta_inv, adv) = metaplectic_op(grid, lambda, kind)?;
    let g = rep_vectors(grid);
    let mut worst: f64 = 0.0;
    for &x in &SAMPLES {
        let lhs = schrodinger_rep(grid, lambda, kind.act(x))?.apply(&g);
        let rhs = eta.apply(&schrodinger_rep(grid, lambda, x)?.apply(&eta_inv.apply(&g)));
        worst = worst.max(relative_residual(&lhs, &rhs));
    }
    let param = match kind {
        MetaplecticKind::Dilation(a) => a.to_string(),
        MetaplecticKind::Chirp(c) => c.to_string(),
        MetaplecticKind::J => String::new(),
    };
    let mut rep = ResidualReport::new("metaplectic", grid, worst, 1e-6, Bound::Max)
        .param("lambda", lambda)
        .param("kind", kind.name());
    if !param.is_empty() {
        rep = rep.param("value", param);
    }
    rep.advisories = adv;
    Ok(sign_note(rep, lambda))
}
