//! Hyperelastic stored-energy models and the membrane geometry they act on:
//! stretch, bend rate, deformation pressure, and the tangential balance
//! diagnostic.
//!
//! A model supplies the energy density `E(nu, mu)` and its first and second
//! partials. Construction validates the rest state and local convexity
//! (E, E1, E2, E12 vanish at (1,0); E11, E22 positive) and cross-checks the
//! supplied partials against central differences of E.

use crate::error::{Error, Result};
use crate::spectral::{differentiate, hilbert_strip, Parity, PeriodicField, StripGeometry};
use std::sync::Arc;

/// Minimum admissible stretch on the collocation grid; below this the profile
/// is treated as degenerate.
pub const MIN_STRETCH: f64 = 1e-8;

/// Stored-energy density of the membrane with first and second partials in
/// the stretch (`nu`) and bend-rate (`mu`) arguments.
pub trait StoredEnergy: Send + Sync {
    fn label(&self) -> &str;
    fn energy(&self, nu: f64, mu: f64) -> f64;
    /// E1 = dE/dnu
    fn d_nu(&self, nu: f64, mu: f64) -> f64;
    /// E2 = dE/dmu
    fn d_mu(&self, nu: f64, mu: f64) -> f64;
    /// E11
    fn d_nu_nu(&self, nu: f64, mu: f64) -> f64;
    /// E12
    fn d_nu_mu(&self, nu: f64, mu: f64) -> f64;
    /// E22
    fn d_mu_mu(&self, nu: f64, mu: f64) -> f64;
}

/// Quadratic model `E = alpha/2 (nu-1)^2 + beta/2 mu^2`; the simplest energy
/// satisfying the rest-state and convexity hypotheses.
#[derive(Clone, Debug)]
pub struct QuadraticEnergy {
    alpha: f64,
    beta: f64,
}

impl StoredEnergy for QuadraticEnergy {
    fn label(&self) -> &str {
        "quadratic"
    }
    fn energy(&self, nu: f64, mu: f64) -> f64 {
        0.5 * self.alpha * (nu - 1.0) * (nu - 1.0) + 0.5 * self.beta * mu * mu
    }
    fn d_nu(&self, nu: f64, _mu: f64) -> f64 {
        self.alpha * (nu - 1.0)
    }
    fn d_mu(&self, _nu: f64, mu: f64) -> f64 {
        self.beta * mu
    }
    fn d_nu_nu(&self, _nu: f64, _mu: f64) -> f64 {
        self.alpha
    }
    fn d_nu_mu(&self, _nu: f64, _mu: f64) -> f64 {
        0.0
    }
    fn d_mu_mu(&self, _nu: f64, _mu: f64) -> f64 {
        self.beta
    }
}

/// One validation line of the rest-state/convexity report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Validated, immutable, shareable stored-energy model.
#[derive(Clone)]
pub struct EnergyModel {
    inner: Arc<dyn StoredEnergy>,
    e11_rest: f64,
    e22_rest: f64,
}

impl std::fmt::Debug for EnergyModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnergyModel")
            .field("label", &self.inner.label())
            .field("e11_rest", &self.e11_rest)
            .field("e22_rest", &self.e22_rest)
            .finish()
    }
}

const REST_TOL: f64 = 1e-10;
const FD_REL_TOL: f64 = 1e-6;

impl EnergyModel {
    /// Wraps and validates a model; fails if the rest-state/convexity checks
    /// or the finite-difference consistency of the partials fail.
    pub fn new(model: impl StoredEnergy + 'static) -> Result<Self> {
        let model = EnergyModel::new_unchecked(model);
        let report = model.hypothesis_report();
        if let Some(bad) = report.iter().find(|c| !c.passed) {
            return Err(Error::ModelHypothesis(format!(
                "{} = {:.3e} violates tolerance {:.1e}",
                bad.name, bad.value, bad.tolerance
            )));
        }
        model.check_partials()?;
        Ok(model)
    }

    /// Skips validation; intended for diagnostics with deliberately
    /// non-admissible models (e.g. a pure-stretch membrane with beta = 0).
    pub fn new_unchecked(model: impl StoredEnergy + 'static) -> Self {
        let e11 = model.d_nu_nu(1.0, 0.0);
        let e22 = model.d_mu_mu(1.0, 0.0);
        EnergyModel {
            inner: Arc::new(model),
            e11_rest: e11,
            e22_rest: e22,
        }
    }

    /// Built-in quadratic model with stiffnesses `alpha` (stretch) and `beta`
    /// (bend).
    pub fn quadratic(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadratic model needs positive stiffnesses, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Self::new(QuadraticEnergy { alpha, beta })
    }

    pub fn label(&self) -> &str {
        self.inner.label()
    }

    /// E11 at the rest state (1, 0).
    pub fn e11_rest(&self) -> f64 {
        self.e11_rest
    }

    /// E22 at the rest state (1, 0); the flexural coefficient of the
    /// dispersion relation.
    pub fn e22_rest(&self) -> f64 {
        self.e22_rest
    }

    pub fn energy(&self, nu: f64, mu: f64) -> f64 {
        self.inner.energy(nu, mu)
    }
    pub fn e1(&self, nu: f64, mu: f64) -> f64 {
        self.inner.d_nu(nu, mu)
    }
    pub fn e2(&self, nu: f64, mu: f64) -> f64 {
        self.inner.d_mu(nu, mu)
    }

    /// Rest-state and local-convexity checks, each evaluated numerically.
    pub fn hypothesis_report(&self) -> Vec<HypothesisCheck> {
        let m = &self.inner;
        let small = |name: &str, value: f64| HypothesisCheck {
            name: name.into(),
            value,
            tolerance: REST_TOL,
            passed: value.abs() <= REST_TOL,
        };
        let positive = |name: &str, value: f64| HypothesisCheck {
            name: name.into(),
            value,
            tolerance: REST_TOL,
            passed: value > REST_TOL,
        };
        vec![
            small("E(1,0)", m.energy(1.0, 0.0)),
            small("E1(1,0)", m.d_nu(1.0, 0.0)),
            small("E2(1,0)", m.d_mu(1.0, 0.0)),
            small("E12(1,0)", m.d_nu_mu(1.0, 0.0)),
            positive("E11(1,0)", m.d_nu_nu(1.0, 0.0)),
            positive("E22(1,0)", m.d_mu_mu(1.0, 0.0)),
        ]
    }

    /// Central-difference consistency of the supplied partials on a sample
    /// grid around the rest state.
    fn check_partials(&self) -> Result<()> {
        let m = &self.inner;
        let step = 1e-5;
        let rel = |fd: f64, an: f64| (fd - an).abs() / (1.0 + an.abs());
        for &nu in &[0.9, 1.0, 1.1] {
            for &mu in &[-0.1, 0.0, 0.1] {
                let fd_e1 = (m.energy(nu + step, mu) - m.energy(nu - step, mu)) / (2.0 * step);
                let fd_e2 = (m.energy(nu, mu + step) - m.energy(nu, mu - step)) / (2.0 * step);
                let fd_e11 = (m.d_nu(nu + step, mu) - m.d_nu(nu - step, mu)) / (2.0 * step);
                let fd_e12 = (m.d_nu(nu, mu + step) - m.d_nu(nu, mu - step)) / (2.0 * step);
                let fd_e22 = (m.d_mu(nu, mu + step) - m.d_mu(nu, mu - step)) / (2.0 * step);
                let checks = [
                    ("E1", rel(fd_e1, m.d_nu(nu, mu))),
                    ("E2", rel(fd_e2, m.d_mu(nu, mu))),
                    ("E11", rel(fd_e11, m.d_nu_nu(nu, mu))),
                    ("E12", rel(fd_e12, m.d_nu_mu(nu, mu))),
                    ("E22", rel(fd_e22, m.d_mu_mu(nu, mu))),
                ];
                for (name, err) in checks {
                    if err > FD_REL_TOL {
                        return Err(Error::ModelHypothesis(format!(
                            "partial {name} disagrees with finite differences at \
                             (nu, mu) = ({nu}, {mu}): relative error {err:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Membrane geometry derived from a surface elevation: stretch, bend rate and
/// their spectral derivatives.
#[derive(Clone, Debug)]
pub struct ProfileGeometry {
    pub nu: PeriodicField,
    pub mu: PeriodicField,
    pub nu_prime: PeriodicField,
    pub mu_prime: PeriodicField,
}

/// Intermediate fields shared by the pressure operator and the reduced
/// residual; all products dealiased on the geometry grid.
pub(crate) struct ProfileExpansion {
    pub w_prime: PeriodicField,
    pub ch_wp: PeriodicField,
    pub nu_sq: PeriodicField,
    pub nu: PeriodicField,
    /// w'' + C_h(w') w'' - w' C_h(w''), the bend-rate numerator.
    pub mu_num: PeriodicField,
    pub mu: PeriodicField,
}

fn require_even_zero_mean(w: &PeriodicField) -> Result<()> {
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
    Ok(())
}

pub(crate) fn expand_profile(w: &PeriodicField, geom: &StripGeometry) -> Result<ProfileExpansion> {
    require_even_zero_mean(w)?;
    let grid = geom.grid();
    let h = geom.depth();

    let w_prime = differentiate(w, 1);
    let w_second = differentiate(w, 2);
    let ch_wp = hilbert_strip(&w_prime, h)?;
    let ch_wpp = hilbert_strip(&w_second, h)?;

    let one_plus = ch_wp.add_constant(1.0);
    let nu_sq = grid
        .multiply(&one_plus, &one_plus)?
        .add(&grid.multiply(&w_prime, &w_prime)?)?;

    let min_sq = grid.min_value(&nu_sq)?;
    if min_sq < MIN_STRETCH * MIN_STRETCH {
        return Err(Error::DegenerateProfile {
            min_nu: min_sq.max(0.0).sqrt(),
            threshold: MIN_STRETCH,
        });
    }
    let nu = grid.compose_pointwise(&nu_sq, f64::sqrt)?;

    let mu_num = w_second
        .add(&grid.multiply(&ch_wp, &w_second)?)?
        .sub(&grid.multiply(&w_prime, &ch_wpp)?)?;
    let mu = grid.compose_pointwise2(&mu_num, &nu_sq, |n, d| n / d)?;

    Ok(ProfileExpansion {
        w_prime,
        ch_wp,
        nu_sq,
        nu,
        mu_num,
        mu,
    })
}

/// Stretch `nu = sqrt((1 + C_h(w'))^2 + w'^2)` and bend rate
/// `mu = (w'' + C_h(w')w'' - w'C_h(w'')) / nu^2` of the deformed membrane,
/// with spectral derivatives.
pub fn stretch_bend(w: &PeriodicField, geom: &StripGeometry) -> Result<ProfileGeometry> {
    let exp = expand_profile(w, geom)?;
    let nu_prime = differentiate(&exp.nu, 1);
    let mu_prime = differentiate(&exp.mu, 1);
    Ok(ProfileGeometry {
        nu: exp.nu,
        mu: exp.mu,
        nu_prime,
        mu_prime,
    })
}

/// Composite energy-derivative fields E1(nu, mu) and E2(nu, mu), evaluated
/// pointwise on the collocation grid and re-transformed.
pub(crate) fn compose_energy_fields(
    exp: &ProfileExpansion,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> Result<(PeriodicField, PeriodicField)> {
    let grid = geom.grid();
    let e1 = grid.compose_pointwise2(&exp.nu, &exp.mu, |n, m| model.e1(n, m))?;
    let e2 = grid.compose_pointwise2(&exp.nu, &exp.mu, |n, m| model.e2(n, m))?;
    Ok((e1, e2))
}

/// Deformation pressure `P = ((E2(nu,mu))' / nu)' / nu - (mu/nu) E1(nu,mu)`.
/// Composite fields are built pointwise and differentiated spectrally.
pub fn pressure(
    w: &PeriodicField,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> Result<PeriodicField> {
    let grid = geom.grid();
    let exp = expand_profile(w, geom)?;
    let (e1c, e2c) = compose_energy_fields(&exp, model, geom)?;

    let inner = grid.compose_pointwise2(&differentiate(&e2c, 1), &exp.nu, |a, b| a / b)?;
    let first = grid.compose_pointwise2(&differentiate(&inner, 1), &exp.nu, |a, b| a / b)?;
    let sigma = grid.compose_pointwise2(&exp.mu, &exp.nu, |a, b| a / b)?;
    first.sub(&grid.multiply(&sigma, &e1c)?)
}

/// Tangential force/moment balance `nu (E1)' + mu (E2)'` as a diagnostic
/// field; expected small on converged solutions but not imposed.
pub fn tangential_balance_residual(
    w: &PeriodicField,
    model: &EnergyModel,
    geom: &StripGeometry,
) -> Result<PeriodicField> {
    let grid = geom.grid();
    let exp = expand_profile(w, geom)?;
    let (e1c, e2c) = compose_energy_fields(&exp, model, geom)?;
    grid.multiply(&exp.nu, &differentiate(&e1c, 1))?
        .add(&grid.multiply(&exp.mu, &differentiate(&e2c, 1))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    struct CoupledEnergy;
    impl StoredEnergy for CoupledEnergy {
        fn label(&self) -> &str {
            "coupled"
        }
        fn energy(&self, nu: f64, mu: f64) -> f64 {
            0.5 * (nu - 1.0) * (nu - 1.0) + 0.5 * mu * mu + (nu - 1.0) * mu
        }
        fn d_nu(&self, nu: f64, mu: f64) -> f64 {
            nu - 1.0 + mu
        }
        fn d_mu(&self, nu: f64, mu: f64) -> f64 {
            mu + (nu - 1.0)
        }
        fn d_nu_nu(&self, _: f64, _: f64) -> f64 {
            1.0
        }
        fn d_nu_mu(&self, _: f64, _: f64) -> f64 {
            1.0
        }
        fn d_mu_mu(&self, _: f64, _: f64) -> f64 {
            1.0
        }
    }

    fn geom(n: usize) -> StripGeometry {
        StripGeometry::new(1.0, 1.0, n).unwrap()
    }

    #[test]
    fn quadratic_closed_form() {
        let m = EnergyModel::quadratic(1.0, 1.0).unwrap();
        assert_eq!(m.energy(1.0, 0.0), 0.0);
        assert_eq!(m.e11_rest(), 1.0);
        assert_eq!(m.e22_rest(), 1.0);

        let m2 = EnergyModel::quadratic(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(m2.e2(1.0, 0.5), 1.0, epsilon = 0.0);
    }

    #[test]
    fn quadratic_rejects_nonpositive() {
        assert!(EnergyModel::quadratic(0.0, 1.0).is_err());
        assert!(EnergyModel::quadratic(1.0, -2.0).is_err());
    }

    #[test]
    fn validator_rejects_mixed_term() {
        // E += nu*mu gives E12(1,0) = 1, breaking local convexity shape.
        let err = EnergyModel::new(CoupledEnergy).unwrap_err();
        match err {
            Error::ModelHypothesis(msg) => assert!(msg.contains("E12"), "{msg}"),
            other => panic!("expected hypothesis error, got {other}"),
        }
    }

    #[test]
    fn rest_profile_is_unstretched() {
        let g = geom(16);
        let w = PeriodicField::zeros(16);
        let p = stretch_bend(&w, &g).unwrap();
        assert_eq!(p.nu.mean(), 1.0);
        assert_eq!(p.nu.coeff_norm(), 1.0);
        assert_eq!(p.mu.coeff_norm(), 0.0);
        assert_eq!(p.nu_prime.coeff_norm(), 0.0);
        assert_eq!(p.mu_prime.coeff_norm(), 0.0);
    }

    #[test]
    fn stretch_bend_rejects_odd_or_meanful() {
        let g = geom(8);
        assert!(stretch_bend(&PeriodicField::sine(8, 1, 0.1), &g).is_err());
        assert!(stretch_bend(&PeriodicField::constant(0.5, 8), &g).is_err());
    }

    #[test]
    fn linearization_matches_multiplier_table() {
        // d(nu)/dw f = C_h(f'), d(mu)/dw f = f'' at w = 0, plus the
        // differentiated rows, checked by central differences.
        let g = geom(24);
        let h = g.depth();
        let eps = 1e-6;
        for k in 1..=8usize {
            let f = PeriodicField::cosine(24, k, 1.0);
            let plus = stretch_bend(&f.scale(eps), &g).unwrap();
            let minus = stretch_bend(&f.scale(-eps), &g).unwrap();
            let d = |a: &PeriodicField, b: &PeriodicField| {
                a.sub(b).unwrap().scale(1.0 / (2.0 * eps))
            };

            let fp = differentiate(&f, 1);
            let targets = [
                (d(&plus.nu, &minus.nu), hilbert_strip(&fp, h).unwrap()),
                (d(&plus.mu, &minus.mu), differentiate(&f, 2)),
                (
                    d(&plus.nu_prime, &minus.nu_prime),
                    hilbert_strip(&differentiate(&f, 2), h).unwrap(),
                ),
                (d(&plus.mu_prime, &minus.mu_prime), differentiate(&f, 3)),
            ];
            for (fd, exact) in targets {
                let err = fd.sub(&exact).unwrap().coeff_norm();
                let scale = exact.coeff_norm().max(1.0);
                assert!(
                    err / scale < 1e-6,
                    "linearization mismatch at k = {k}: {err:.3e} vs scale {scale:.3e}"
                );
            }
        }
    }

    #[test]
    fn pressure_vanishes_at_rest() {
        let g = geom(16);
        let m = EnergyModel::quadratic(1.0, 1.0).unwrap();
        let p = pressure(&PeriodicField::zeros(16), &m, &g).unwrap();
        assert_eq!(p.coeff_norm(), 0.0);
    }

    #[test]
    fn pressure_linear_order_is_flexural() {
        // Linearized pressure about rest is E22 * w'''' (fourth derivative of
        // eps cos x is eps cos x), so the leading mode-1 coefficient is
        // beta * eps.
        let g = geom(24);
        let beta = 2.0;
        let m = EnergyModel::quadratic(1.0, beta).unwrap();
        let eps = 1e-6;
        let w = PeriodicField::cosine(24, 1, eps);
        let p_plus = pressure(&w, &m, &g).unwrap();
        let p_minus = pressure(&w.scale(-1.0), &m, &g).unwrap();
        let lin = p_plus.sub(&p_minus).unwrap().scale(0.5 / eps);
        assert_abs_diff_eq!(lin.cos_coeff(1), beta, epsilon = 1e-5);
    }

    #[test]
    fn pressure_without_bending_term() {
        // With E2 = 0 the operator degenerates to P = -(mu/nu) alpha (nu - 1).
        struct StretchOnly {
            alpha: f64,
        }
        impl StoredEnergy for StretchOnly {
            fn label(&self) -> &str {
                "stretch-only"
            }
            fn energy(&self, nu: f64, _: f64) -> f64 {
                0.5 * self.alpha * (nu - 1.0) * (nu - 1.0)
            }
            fn d_nu(&self, nu: f64, _: f64) -> f64 {
                self.alpha * (nu - 1.0)
            }
            fn d_mu(&self, _: f64, _: f64) -> f64 {
                0.0
            }
            fn d_nu_nu(&self, _: f64, _: f64) -> f64 {
                self.alpha
            }
            fn d_nu_mu(&self, _: f64, _: f64) -> f64 {
                0.0
            }
            fn d_mu_mu(&self, _: f64, _: f64) -> f64 {
                0.0
            }
        }
        let g = geom(16);
        let alpha = 1.3;
        let model = EnergyModel::new_unchecked(StretchOnly { alpha });
        let w = PeriodicField::cosine(16, 1, 0.05);
        let p = pressure(&w, &model, &g).unwrap();

        let exp = expand_profile(&w, &g).unwrap();
        let sigma = g
            .grid()
            .compose_pointwise2(&exp.mu, &exp.nu, |a, b| a / b)
            .unwrap();
        let e1 = g
            .grid()
            .compose_pointwise(&exp.nu, |n| alpha * (n - 1.0))
            .unwrap();
        let expected = g.grid().multiply(&sigma, &e1).unwrap().scale(-1.0);
        assert!(p.sub(&expected).unwrap().coeff_norm() < 1e-12);
    }

    #[test]
    fn tangential_balance_diagnostic() {
        let g = geom(16);
        let m = EnergyModel::quadratic(1.0, 1.0).unwrap();
        let zero = tangential_balance_residual(&PeriodicField::zeros(16), &m, &g).unwrap();
        assert_eq!(zero.coeff_norm(), 0.0);

        // For the quadratic model the diagnostic is alpha nu nu' + beta mu mu',
        // whose leading term alpha nu' is linear in the elevation.
        let r1 = tangential_balance_residual(&PeriodicField::cosine(16, 1, 1e-3), &m, &g)
            .unwrap()
            .coeff_norm();
        let r2 = tangential_balance_residual(&PeriodicField::cosine(16, 1, 2e-3), &m, &g)
            .unwrap()
            .coeff_norm();
        assert!(r1 > 0.0);
        let ratio = r2 / r1;
        assert!(
            (1.9..2.1).contains(&ratio),
            "expected linear leading order, ratio {ratio}"
        );

        // Generic non-solution data is far from balanced.
        let big = tangential_balance_residual(&PeriodicField::cosine(16, 2, 0.05), &m, &g)
            .unwrap()
            .coeff_norm();
        assert!(big > 1e-3);
    }
}
