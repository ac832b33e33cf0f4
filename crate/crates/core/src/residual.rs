//! The reduced quasilinear operator for steady hydroelastic waves, its
//! linearization about laminar flow, the dispersion relation, and dense
//! Jacobians of the truncated system.
//!
//! Unknown ordering is fixed as `(theta, a_1, ..., a_N)` against residual
//! cosine modes `(0, 1, ..., N)`: the pressure-head offset pairs with the
//! constant mode, which makes the linearized operator diagonal at the trivial
//! state.

use crate::elasticity::{compose_energy_fields, expand_profile, EnergyModel};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::spectral::{
    coth, differentiate, hilbert_strip, strip_multiplier, Parity, PeriodicField, StripGeometry,
};
use nalgebra::{DMatrix, DVector};

/// Candidate wave: pressure-head offset `theta = Q - 2gh - lambda^2`, surface
/// elevation `w` (even, zero mean), wave speed parameter
/// `lambda = m/h + gamma h / 2`, and constant vorticity `gamma`.
#[derive(Clone, Debug)]
pub struct SurfaceState {
    theta: f64,
    lambda: f64,
    gamma: f64,
    w: PeriodicField,
}

impl SurfaceState {
    pub fn new(theta: f64, lambda: f64, gamma: f64, w: PeriodicField) -> Result<Self> {
        if ![theta, lambda, gamma].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite state parameter".into(),
            ));
        }
        if w.parity() != Parity::Even {
            return Err(Error::InvalidParameter(
                "surface elevation must be even".into(),
            ));
        }
        if w.mean().abs() > 1e-13 * (1.0 + w.coeff_norm()) {
            return Err(Error::InvalidParameter(format!(
                "surface elevation must have zero mean, got {:.3e}",
                w.mean()
            )));
        }
        Ok(SurfaceState {
            theta,
            lambda,
            gamma,
            w,
        })
    }

    /// Flat-surface laminar state `(theta, w) = (0, 0)`.
    pub fn trivial(lambda: f64, gamma: f64, n_modes: usize) -> Self {
        SurfaceState {
            theta: 0.0,
            lambda,
            gamma,
            w: PeriodicField::zeros(n_modes),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn elevation(&self) -> &PeriodicField {
        &self.w
    }
}

/// Evaluates the reduced operator
/// `F = lambda^2 nu + gamma^2 A^2 nu - 2 lambda gamma A nu
///      - (theta + lambda^2 - 2 g w) nu^3 + (E2)'' nu - (E2)' nu'
///      - (w'' + C_h(w')w'' - w'C_h(w'')) E1`
/// with `A = [w^2]/2h - w + C_h(ww') - w C_h(w')`; all products dealiased.
pub fn evaluate_residual(
    state: &SurfaceState,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> Result<PeriodicField> {
    let grid = geom.grid();
    let h = geom.depth();
    let g = geom.gravity();
    let w = &state.w;
    let (lambda, gamma, theta) = (state.lambda, state.gamma, state.theta);

    let exp = expand_profile(w, geom)?;
    let (e1c, e2c) = compose_energy_fields(&exp, model, geom)?;
    let e2_prime = differentiate(&e2c, 1);
    let e2_second = differentiate(&e2c, 2);
    let nu_prime = differentiate(&exp.nu, 1);

    let w_sq = grid.multiply(w, w)?;
    let ww_prime = grid.multiply(w, &exp.w_prime)?;
    let stream_shift = hilbert_strip(&ww_prime, h)?
        .sub(w)?
        .sub(&grid.multiply(w, &exp.ch_wp)?)?
        .add_constant(w_sq.mean() / (2.0 * h));

    let nu_cubed = grid.multiply(&grid.multiply(&exp.nu, &exp.nu)?, &exp.nu)?;
    let head = w.scale(-2.0 * g).add_constant(theta + lambda * lambda);

    let hydro = exp
        .nu
        .scale(lambda * lambda)
        .add(
            &grid
                .multiply(&grid.multiply(&stream_shift, &stream_shift)?, &exp.nu)?
                .scale(gamma * gamma),
        )?
        .sub(
            &grid
                .multiply(&stream_shift, &exp.nu)?
                .scale(2.0 * lambda * gamma),
        )?
        .sub(&grid.multiply(&head, &nu_cubed)?)?;

    let elastic = grid
        .multiply(&e2_second, &exp.nu)?
        .sub(&grid.multiply(&e2_prime, &nu_prime)?)?
        .sub(&grid.multiply(&exp.mu_num, &e1c)?)?;

    hydro.add(&elastic)
}

/// Stable roots `(r_plus, r_minus)` of the dispersion quadratic
/// `D_n(lambda) = 0`; `r_plus > 0 > r_minus` always, since the constant term
/// of the monic quadratic is `-(g + n^4 E22/2) T_n < 0`.
pub(crate) fn dispersion_roots(
    n: usize,
    gamma: f64,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> (f64, f64) {
    let t = strip_multiplier(n, geom.depth());
    let b = gamma * t;
    let nf = n as f64;
    let c = (geom.gravity() + nf.powi(4) * model.e22_rest() / 2.0) * t;
    let s = (b * b / 4.0 + c).sqrt();
    // Vieta for the cancellation-prone root.
    if b >= 0.0 {
        let r_plus = b / 2.0 + s;
        (r_plus, -c / r_plus)
    } else {
        let r_minus = b / 2.0 - s;
        (-c / r_minus, r_minus)
    }
}

/// Dispersion relation `D_n = 2 n coth(nh) lambda^2 - 2 lambda gamma
/// - (2g + n^4 E22)`, evaluated in factored form through its stable roots so
/// that the value stays accurate near the bifurcation points.
pub fn dispersion(
    n: usize,
    lambda: f64,
    gamma: f64,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> f64 {
    assert!(n >= 1, "dispersion mode must be at least 1");
    let (r_plus, r_minus) = dispersion_roots(n, gamma, model, geom);
    let leading = 2.0 * n as f64 * coth(n as f64 * geom.depth());
    leading * (lambda - r_plus) * (lambda - r_minus)
}

/// Linearization of the reduced operator at the trivial state applied to the
/// direction `(zeta, f)` with `f` even:
/// `-zeta - sum_k D_k(lambda, gamma) a_k cos(kx)`. The mean of `f` is
/// ignored (the operator pairs it with `zeta`).
pub fn linearized_trivial(
    lambda: f64,
    gamma: f64,
    model: &EnergyModel,
    geom: &StripGeometry,
    f: &PeriodicField,
    zeta: f64,
) -> PeriodicField {
    let n = f.n_modes();
    let mut cos = vec![0.0; n + 1];
    cos[0] = -zeta;
    for k in 1..=n {
        cos[k] = -dispersion(k, lambda, gamma, model, geom) * f.cos_coeff(k);
    }
    PeriodicField::from_cosine_coeffs(cos)
}

/// Physical parameters `(m, Q)` of a state: mass flux `m = h(lambda - gamma
/// h/2)` and Bernoulli constant `Q = theta + 2gh + lambda^2`.
pub fn to_physical(state: &SurfaceState, geom: &StripGeometry) -> (f64, f64) {
    let h = geom.depth();
    let m = h * (state.lambda - state.gamma * h / 2.0);
    let q = state.theta + 2.0 * geom.gravity() * h + state.lambda * state.lambda;
    (m, q)
}

/// Inverse of [`to_physical`]: recovers `(lambda, theta)` from `(m, Q)`.
pub fn from_physical(m: f64, q: f64, gamma: f64, geom: &StripGeometry) -> (f64, f64) {
    let h = geom.depth();
    let lambda = m / h + gamma * h / 2.0;
    let theta = q - 2.0 * geom.gravity() * h - lambda * lambda;
    (lambda, theta)
}

/// How the Jacobian over `(theta, a_1..a_N)` is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianMode {
    /// Closed-form diagonal `(-1, -D_1, ..., -D_N)`; valid only at the
    /// trivial state.
    AnalyticTrivial,
    /// Central differences, columns assembled independently.
    FiniteDifference,
}

/// Packs the unknowns `(theta, a_1..a_N)`.
pub(crate) fn pack_unknowns(state: &SurfaceState) -> DVector<f64> {
    let n = state.w.n_modes();
    let mut u = DVector::zeros(n + 1);
    u[0] = state.theta;
    for k in 1..=n {
        u[k] = state.w.cos_coeff(k);
    }
    u
}

/// Rebuilds a state from packed unknowns at fixed `(lambda, gamma)`.
pub(crate) fn unpack_unknowns(u: &DVector<f64>, lambda: f64, gamma: f64) -> SurfaceState {
    let n = u.len() - 1;
    let mut cos = vec![0.0; n + 1];
    for k in 1..=n {
        cos[k] = u[k];
    }
    SurfaceState {
        theta: u[0],
        lambda,
        gamma,
        w: PeriodicField::from_cosine_coeffs(cos),
    }
}

/// Residual cosine coefficients as a vector over modes `0..=N`.
pub(crate) fn residual_vector(
    state: &SurfaceState,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> Result<DVector<f64>> {
    let f = evaluate_residual(state, model, geom)?;
    let n = geom.n_modes();
    Ok(DVector::from_fn(n + 1, |k, _| f.cos_coeff(k)))
}

/// Finite-difference step scale: `1e-6 * max(1, ||u||)`.
pub(crate) fn fd_step(u: &DVector<f64>) -> f64 {
    1e-6 * u.norm().max(1.0)
}

/// Dense Jacobian of the residual modes with respect to `(theta, a_1..a_N)`
/// at fixed `(lambda, gamma)`. Finite-difference columns are assembled
/// independently (in parallel with the `parallel` feature).
pub fn jacobian(
    state: &SurfaceState,
    model: &EnergyModel,
    geom: &StripGeometry,
    mode: JacobianMode,
) -> Result<DMatrix<f64>> {
    let n = geom.n_modes();
    match mode {
        JacobianMode::AnalyticTrivial => {
            let trivial =
                state.theta.abs() <= 1e-12 && state.w.coeff_norm() <= 1e-12;
            if !trivial {
                return Err(Error::InvalidParameter(
                    "analytic Jacobian is only available at the trivial state".into(),
                ));
            }
            let mut j = DMatrix::zeros(n + 1, n + 1);
            j[(0, 0)] = -1.0;
            for k in 1..=n {
                j[(k, k)] = -dispersion(k, state.lambda, state.gamma, model, geom);
            }
            Ok(j)
        }
        JacobianMode::FiniteDifference => {
            let u0 = pack_unknowns(state);
            let step = fd_step(&u0);
            if step == 0.0 || !step.is_finite() {
                return Err(Error::FdPrecision("finite-difference step underflow".into()));
            }
            let cols: Vec<Result<DVector<f64>>> = map_indexed(n + 1, |j| {
                let mut up = u0.clone();
                let mut um = u0.clone();
                up[j] += step;
                um[j] -= step;
                let rp = residual_vector(&unpack_unknowns(&up, state.lambda, state.gamma), model, geom)?;
                let rm = residual_vector(&unpack_unknowns(&um, state.lambda, state.gamma), model, geom)?;
                Ok((rp - rm) / (2.0 * step))
            });
            let mut jac = DMatrix::zeros(n + 1, n + 1);
            for (j, col) in cols.into_iter().enumerate() {
                jac.set_column(j, &col?);
            }
            Ok(jac)
        }
    }
}
