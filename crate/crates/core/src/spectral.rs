//! Truncated Fourier representation of real 2π-periodic functions together
//! with the strip Fourier-multiplier operators (periodic Hilbert transform,
//! Dirichlet–Neumann map, spectral differentiation) and dealiased pointwise
//! products on a uniform collocation grid.
//!
//! A field is stored as cosine coefficients `a_0..a_N` and sine coefficients
//! `b_1..b_N`. Parity is tracked explicitly: operations declare the parity of
//! their output via the parity algebra and verify it against the computed
//! coefficients. A violation above tolerance is an error, not something to
//! project away silently.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Relative tolerance for off-parity coefficient content produced by grid
/// round trips. Violations above this level indicate a symmetry-breaking bug.
pub const PARITY_TOL: f64 = 1e-12;

/// Symmetry class of a periodic field about x = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// Pure cosine series (f(-x) = f(x)).
    Even,
    /// Pure sine series (f(-x) = -f(x)).
    Odd,
    /// No declared symmetry.
    None,
}

impl Parity {
    /// Parity of a pointwise product: even·even = even, even·odd = odd,
    /// odd·odd = even; anything involving `None` is `None`.
    pub fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Parity::Even,
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => Parity::Odd,
            _ => Parity::None,
        }
    }

    /// Parity after one differentiation or one Hilbert transform.
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }

    fn combine_sum(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::None
        }
    }
}

/// Real 2π-periodic function truncated at mode `N`, immutable after
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicField {
    cos: Vec<f64>,
    sin: Vec<f64>,
    parity: Parity,
}

impl PeriodicField {
    /// Zero field at truncation `n`.
    pub fn zeros(n: usize) -> Self {
        PeriodicField {
            cos: vec![0.0; n + 1],
            sin: vec![0.0; n],
            parity: Parity::Even,
        }
    }

    /// Constant field `c`.
    pub fn constant(c: f64, n: usize) -> Self {
        let mut f = Self::zeros(n);
        f.cos[0] = c;
        f
    }

    /// `amp · cos(k x)`.
    pub fn cosine(n: usize, k: usize, amp: f64) -> Self {
        assert!(k >= 1 && k <= n, "cosine mode {k} outside 1..={n}");
        let mut f = Self::zeros(n);
        f.cos[k] = amp;
        f
    }

    /// `amp · sin(k x)`.
    pub fn sine(n: usize, k: usize, amp: f64) -> Self {
        assert!(k >= 1 && k <= n, "sine mode {k} outside 1..={n}");
        let mut f = Self::zeros(n);
        f.sin[k - 1] = amp;
        f.parity = Parity::Odd;
        f
    }

    /// Builds a field from raw coefficients, validating finiteness and the
    /// declared parity.
    pub fn from_coeffs(cos: Vec<f64>, sin: Vec<f64>, parity: Parity) -> Result<Self> {
        if cos.len() != sin.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "coefficient lengths inconsistent: {} cosine vs {} sine",
                cos.len(),
                sin.len()
            )));
        }
        if cos.iter().chain(sin.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite Fourier coefficient".into(),
            ));
        }
        let field = PeriodicField { cos, sin, parity };
        field.check_parity("from_coeffs", 0.0)?;
        Ok(field)
    }

    /// Pure cosine series `a_0..a_N`; parity even.
    pub fn from_cosine_coeffs(cos: Vec<f64>) -> Self {
        let n = cos.len().saturating_sub(1);
        PeriodicField {
            cos,
            sin: vec![0.0; n],
            parity: Parity::Even,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Cosine coefficient `a_k` (zero beyond the truncation).
    pub fn cos_coeff(&self, k: usize) -> f64 {
        self.cos.get(k).copied().unwrap_or(0.0)
    }

    /// Sine coefficient `b_k`, `k >= 1`.
    pub fn sin_coeff(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.sin.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Mean over one period, `[f] = a_0`.
    pub fn mean(&self) -> f64 {
        self.cos[0]
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        let s: f64 = self
            .cos
            .iter()
            .chain(self.sin.iter())
            .map(|c| c * c)
            .sum();
        s.sqrt()
    }

    /// Evaluates the truncated series at an arbitrary point.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = self.cos[0];
        for k in 1..=self.n_modes() {
            let kx = k as f64 * x;
            acc += self.cos[k] * kx.cos() + self.sin[k - 1] * kx.sin();
        }
        acc
    }

    pub fn scale(&self, c: f64) -> Self {
        PeriodicField {
            cos: self.cos.iter().map(|a| c * a).collect(),
            sin: self.sin.iter().map(|b| c * b).collect(),
            parity: self.parity,
        }
    }

    /// Adds a constant to the mean mode.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.cos[0] += c;
        out
    }

    /// `extra_scale` anchors the tolerance to the magnitude of the data the
    /// coefficients were computed from, so that near-zero fields produced by
    /// cancellation are not flagged on round-off noise.
    fn check_parity(&self, context: &'static str, extra_scale: f64) -> Result<()> {
        let norm_a: f64 = self.cos.iter().map(|c| c * c).sum::<f64>().sqrt();
        let norm_b: f64 = self.sin.iter().map(|c| c * c).sum::<f64>().sqrt();
        let tol = PARITY_TOL * (norm_a + norm_b + extra_scale);
        let off = match self.parity {
            Parity::Even => self.sin.iter().fold(0.0f64, |m, b| m.max(b.abs())),
            Parity::Odd => self.cos.iter().fold(0.0f64, |m, a| m.max(a.abs())),
            Parity::None => return Ok(()),
        };
        if off > tol {
            return Err(Error::ParityViolation {
                context,
                amplitude: off,
                tolerance: tol,
            });
        }
        Ok(())
    }

    /// Drops coefficients of the opposite parity (round-off noise already
    /// verified below tolerance by the caller).
    fn project_parity(mut self) -> Self {
        match self.parity {
            Parity::Even => self.sin.iter_mut().for_each(|b| *b = 0.0),
            Parity::Odd => self.cos.iter_mut().for_each(|a| *a = 0.0),
            Parity::None => {}
        }
        self
    }

    fn binary_op(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n_modes() != other.n_modes() {
            return Err(Error::TruncationMismatch {
                expected: self.n_modes(),
                got: other.n_modes(),
            });
        }
        Ok(PeriodicField {
            cos: self
                .cos
                .iter()
                .zip(&other.cos)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            sin: self
                .sin
                .iter()
                .zip(&other.sin)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            parity: self.parity.combine_sum(other.parity),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary_op(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary_op(other, |a, b| a - b)
    }
}

/// Numerically stable coth for positive arguments. Exact to round-off via
/// expm1; saturates to 1 beyond t = 36 where coth(t) - 1 < 1e-31.
pub fn coth(t: f64) -> f64 {
    debug_assert!(t > 0.0, "coth argument must be positive");
    if t > 36.0 {
        1.0
    } else {
        1.0 + 2.0 / f64::exp_m1(2.0 * t)
    }
}

/// `T_n = tanh(n h) / n`, the decreasing multiplier sequence of the strip.
pub fn strip_multiplier(n: usize, h: f64) -> f64 {
    (n as f64 * h).tanh() / n as f64
}

fn require_positive_depth(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "conformal depth must be positive and finite, got {h}"
        )));
    }
    Ok(())
}

/// Periodic Hilbert transform for the strip of depth `h`:
/// `cos(kx) -> coth(kh) sin(kx)`, `sin(kx) -> -coth(kh) cos(kx)`.
/// The constant mode is annihilated; parity flips.
pub fn hilbert_strip(f: &PeriodicField, h: f64) -> Result<PeriodicField> {
    require_positive_depth(h)?;
    let n = f.n_modes();
    let mut cos = vec![0.0; n + 1];
    let mut sin = vec![0.0; n];
    for k in 1..=n {
        let c = coth(k as f64 * h);
        sin[k - 1] = c * f.cos[k];
        cos[k] = -c * f.sin[k - 1];
    }
    Ok(PeriodicField {
        cos,
        sin,
        parity: f.parity.flipped(),
    })
}

/// Spectral differentiation of the given order (1 ..= 4); exact on the
/// truncated series. Parity flips once per order.
pub fn differentiate(f: &PeriodicField, order: usize) -> PeriodicField {
    assert!(
        (1..=4).contains(&order),
        "differentiation order {order} outside 1..=4"
    );
    let mut out = f.clone();
    for _ in 0..order {
        let n = out.n_modes();
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n];
        for k in 1..=n {
            let kf = k as f64;
            cos[k] = kf * out.sin[k - 1];
            sin[k - 1] = -kf * out.cos[k];
        }
        out = PeriodicField {
            cos,
            sin,
            parity: out.parity.flipped(),
        };
    }
    out
}

/// Periodic Dirichlet–Neumann operator for the strip:
/// `G_h(f) = [f]/h + C_h(f')`. The constant mode maps to `mean(f)/h`.
pub fn dirichlet_neumann(f: &PeriodicField, h: f64) -> Result<PeriodicField> {
    require_positive_depth(h)?;
    let out = hilbert_strip(&differentiate(f, 1), h)?;
    Ok(out.add_constant(f.mean() / h))
}

/// Uniform collocation grid over [0, 2π) with precomputed trig tables.
///
/// The tables are built with explicit mirror symmetry
/// (`cos(k x_{M-j}) = cos(k x_j)`, `sin(k x_{M-j}) = -sin(k x_j)` bit for bit)
/// so that even/odd grid data analyze to clean parities.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    n: usize,
    m: usize,
    nodes: Vec<f64>,
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl SpectralGrid {
    /// Grid with the default dealiasing size M = 3N rounded up to even.
    pub fn new(n: usize) -> Result<Self> {
        let m = (3 * n).div_ceil(2) * 2;
        Self::with_size(n, m)
    }

    pub fn with_size(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "spectral truncation must be at least 1".into(),
            ));
        }
        if m < 3 * n || m % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "collocation size must be even and at least 3N, got M = {m} for N = {n}"
            )));
        }
        let mut nodes = vec![0.0; m];
        for (j, x) in nodes.iter_mut().enumerate() {
            *x = 2.0 * PI * j as f64 / m as f64;
        }
        let mut cos_tab = vec![0.0; (n + 1) * m];
        let mut sin_tab = vec![0.0; (n + 1) * m];
        for k in 0..=n {
            let row = k * m;
            for j in 0..=m / 2 {
                let arg = k as f64 * nodes[j];
                cos_tab[row + j] = arg.cos();
                sin_tab[row + j] = arg.sin();
            }
            for j in m / 2 + 1..m {
                cos_tab[row + j] = cos_tab[row + m - j];
                sin_tab[row + j] = -sin_tab[row + m - j];
            }
        }
        Ok(SpectralGrid {
            n,
            m,
            nodes,
            cos_tab,
            sin_tab,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Collocation nodes x_j = 2π j / M.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn check_field(&self, f: &PeriodicField) -> Result<()> {
        if f.n_modes() != self.n {
            return Err(Error::TruncationMismatch {
                expected: self.n,
                got: f.n_modes(),
            });
        }
        Ok(())
    }

    /// Evaluates the field on the collocation nodes.
    pub fn synthesize(&self, f: &PeriodicField) -> Result<Vec<f64>> {
        self.check_field(f)?;
        let mut values = vec![f.cos[0]; self.m];
        for k in 1..=self.n {
            let (a, b) = (f.cos[k], f.sin[k - 1]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let row = k * self.m;
            for (j, v) in values.iter_mut().enumerate() {
                *v += a * self.cos_tab[row + j] + b * self.sin_tab[row + j];
            }
        }
        Ok(values)
    }

    /// Transforms grid values back to coefficients, truncating at N and
    /// verifying the expected parity. The mean is removed before correlating
    /// against the k >= 1 modes, so constant data analyzes to a pure a_0
    /// exactly.
    pub fn analyze(&self, values: &[f64], parity: Parity) -> Result<PeriodicField> {
        self.analyze_with_scale(values, parity, 0.0)
    }

    /// `analyze` with an extra magnitude hint for the parity tolerance; used
    /// when the grid values come from a computation whose natural scale is
    /// larger than the (possibly cancelled) result.
    fn analyze_with_scale(
        &self,
        values: &[f64],
        parity: Parity,
        scale_hint: f64,
    ) -> Result<PeriodicField> {
        assert_eq!(values.len(), self.m, "grid value count mismatch");
        let mean = values.iter().sum::<f64>() / self.m as f64;
        let mut cos = vec![0.0; self.n + 1];
        let mut sin = vec![0.0; self.n];
        cos[0] = mean;
        let scale = 2.0 / self.m as f64;
        for k in 1..=self.n {
            let row = k * self.m;
            let mut ca = 0.0;
            let mut sa = 0.0;
            for (j, v) in values.iter().enumerate() {
                let dv = v - mean;
                ca += dv * self.cos_tab[row + j];
                sa += dv * self.sin_tab[row + j];
            }
            cos[k] = scale * ca;
            sin[k - 1] = scale * sa;
        }
        let scale = values
            .iter()
            .fold(scale_hint, |m, v| m.max(v.abs()));
        let field = PeriodicField { cos, sin, parity };
        field.check_parity("analyze", scale)?;
        Ok(field.project_parity())
    }

    /// Dealiased pointwise product: both factors are evaluated on the M >= 3N
    /// grid, multiplied, and transformed back truncated at N. The output
    /// parity follows the parity algebra.
    pub fn multiply(&self, f: &PeriodicField, g: &PeriodicField) -> Result<PeriodicField> {
        let fv = self.synthesize(f)?;
        let gv = self.synthesize(g)?;
        let fmax = fv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gmax = gv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
        // The parity anchor is the factors' magnitude: products can cancel
        // pointwise (e.g. onto the Nyquist mode) leaving only table noise.
        self.analyze_with_scale(&prod, f.parity.product(g.parity), fmax * gmax)
    }

    /// Applies a smooth scalar function to the collocation values of `f` and
    /// re-transforms. Non-finite results (e.g. sqrt of a negative value) are
    /// reported with the offending grid index.
    pub fn compose_pointwise(
        &self,
        f: &PeriodicField,
        func: impl Fn(f64) -> f64,
    ) -> Result<PeriodicField> {
        let values = self.synthesize(f)?;
        let mapped = self.apply_checked(values, |v| func(v))?;
        let parity = match f.parity {
            Parity::Even => Parity::Even,
            _ => Parity::None,
        };
        self.analyze(&mapped, parity)
    }

    /// Two-field variant of [`compose_pointwise`](Self::compose_pointwise).
    pub fn compose_pointwise2(
        &self,
        f: &PeriodicField,
        g: &PeriodicField,
        func: impl Fn(f64, f64) -> f64,
    ) -> Result<PeriodicField> {
        let fv = self.synthesize(f)?;
        let gv = self.synthesize(g)?;
        let mut combined = fv;
        for (j, v) in combined.iter_mut().enumerate() {
            *v = func(*v, gv[j]);
        }
        let mapped = self.apply_checked(combined, |v| v)?;
        let parity = match (f.parity, g.parity) {
            (Parity::Even, Parity::Even) => Parity::Even,
            _ => Parity::None,
        };
        self.analyze(&mapped, parity)
    }

    fn apply_checked(
        &self,
        values: Vec<f64>,
        func: impl Fn(f64) -> f64,
    ) -> Result<Vec<f64>> {
        let mut out = values;
        for (index, v) in out.iter_mut().enumerate() {
            *v = func(*v);
            if !v.is_finite() {
                return Err(Error::PointwiseEvaluation { index });
            }
        }
        Ok(out)
    }

    /// Minimum of the field over the collocation nodes.
    pub fn min_value(&self, f: &PeriodicField) -> Result<f64> {
        Ok(self
            .synthesize(f)?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    /// Maximum of |f| over the collocation nodes.
    pub fn max_abs(&self, f: &PeriodicField) -> Result<f64> {
        Ok(self
            .synthesize(f)?
            .into_iter()
            .fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

/// Conformal strip geometry: mean depth, gravity, and the collocation grid.
#[derive(Clone, Debug)]
pub struct StripGeometry {
    h: f64,
    gravity: f64,
    grid: SpectralGrid,
}

impl StripGeometry {
    /// Geometry with the default grid size M = 3N rounded up to even.
    pub fn new(h: f64, gravity: f64, n_modes: usize) -> Result<Self> {
        let grid = SpectralGrid::new(n_modes)?;
        Self::from_grid(h, gravity, grid)
    }

    pub fn with_grid_size(h: f64, gravity: f64, n_modes: usize, m: usize) -> Result<Self> {
        let grid = SpectralGrid::with_size(n_modes, m)?;
        Self::from_grid(h, gravity, grid)
    }

    fn from_grid(h: f64, gravity: f64, grid: SpectralGrid) -> Result<Self> {
        require_positive_depth(h)?;
        if !(gravity > 0.0) || !gravity.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gravity must be positive and finite, got {gravity}"
            )));
        }
        Ok(StripGeometry { h, gravity, grid })
    }

    pub fn depth(&self) -> f64 {
        self.h
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    pub fn n_modes(&self) -> usize {
        self.grid.n_modes()
    }

    pub fn grid_size(&self) -> usize {
        self.grid.size()
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const COTH_1: f64 = 1.3130352854993313;

    #[test]
    fn hilbert_cos_to_coth_sin() {
        let f = PeriodicField::cosine(8, 1, 1.0);
        let g = hilbert_strip(&f, 1.0).unwrap();
        assert_eq!(g.parity(), Parity::Odd);
        assert_abs_diff_eq!(g.sin_coeff(1), COTH_1, epsilon = 1e-15);
        assert_eq!(g.mean(), 0.0);
    }

    #[test]
    fn hilbert_annihilates_constants() {
        let f = PeriodicField::constant(1.0, 8);
        let g = hilbert_strip(&f, 1.0).unwrap();
        assert_eq!(g.coeff_norm(), 0.0);
    }

    #[test]
    fn hilbert_sin_to_minus_coth_cos() {
        let f = PeriodicField::sine(8, 2, 1.0);
        let g = hilbert_strip(&f, 1.0).unwrap();
        let coth2 = 1.0 / 2.0f64.tanh();
        assert_abs_diff_eq!(g.cos_coeff(2), -coth2, epsilon = 1e-15);
        assert_eq!(g.parity(), Parity::Even);
    }

    #[test]
    fn hilbert_rejects_bad_depth() {
        let f = PeriodicField::cosine(4, 1, 1.0);
        assert!(hilbert_strip(&f, 0.0).is_err());
        assert!(hilbert_strip(&f, -1.0).is_err());
    }

    #[test]
    fn dirichlet_neumann_constant_and_mean() {
        let f = PeriodicField::constant(3.0, 4);
        let g = dirichlet_neumann(&f, 2.0).unwrap();
        assert_abs_diff_eq!(g.mean(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.coeff_norm(), 1.5, epsilon = 1e-15);

        // [f] = h gives exactly 1.
        let f = PeriodicField::constant(1.0, 4);
        let g = dirichlet_neumann(&f, 1.0).unwrap();
        assert_abs_diff_eq!(g.mean(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dirichlet_neumann_cosine_multiplier() {
        // G_h(cos kx) = k coth(kh) cos(kx)
        for k in 1..=5usize {
            let f = PeriodicField::cosine(8, k, 1.0);
            let g = dirichlet_neumann(&f, 1.0).unwrap();
            let expected = k as f64 * coth(k as f64);
            assert_abs_diff_eq!(g.cos_coeff(k), expected, epsilon = 1e-13);
            assert_eq!(g.parity(), Parity::Even);
        }
    }

    #[test]
    fn differentiate_orders() {
        let f = PeriodicField::cosine(8, 3, 1.0);
        let d1 = differentiate(&f, 1);
        assert_abs_diff_eq!(d1.sin_coeff(3), -3.0, epsilon = 0.0);
        assert_eq!(d1.parity(), Parity::Odd);
        let d4 = differentiate(&f, 4);
        assert_abs_diff_eq!(d4.cos_coeff(3), 81.0, epsilon = 0.0);
        assert_eq!(d4.parity(), Parity::Even);

        let z = differentiate(&PeriodicField::zeros(8), 2);
        assert_eq!(z.coeff_norm(), 0.0);
    }

    #[test]
    fn multiply_product_to_sum() {
        let grid = SpectralGrid::new(8).unwrap();
        let f = PeriodicField::cosine(8, 1, 1.0);
        let p = grid.multiply(&f, &f).unwrap();
        assert_abs_diff_eq!(p.cos_coeff(0), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.cos_coeff(2), 0.5, epsilon = 1e-14);
        assert!(p.cos_coeff(1).abs() < 1e-14);
        assert_eq!(p.parity(), Parity::Even);
    }

    #[test]
    fn multiply_by_zero() {
        let grid = SpectralGrid::new(8).unwrap();
        let f = PeriodicField::cosine(8, 2, 2.5);
        let z = PeriodicField::zeros(8);
        let p = grid.multiply(&f, &z).unwrap();
        assert_eq!(p.coeff_norm(), 0.0);
    }

    #[test]
    fn multiply_sines() {
        // sin(x) sin(2x) = cos(x)/2 - cos(3x)/2
        let grid = SpectralGrid::new(8).unwrap();
        let f = PeriodicField::sine(8, 1, 1.0);
        let g = PeriodicField::sine(8, 2, 1.0);
        let p = grid.multiply(&f, &g).unwrap();
        assert_abs_diff_eq!(p.cos_coeff(1), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.cos_coeff(3), -0.5, epsilon = 1e-14);
        assert_eq!(p.parity(), Parity::Even);
    }

    #[test]
    fn mean_and_evaluate() {
        let mut f = PeriodicField::cosine(4, 1, 1.0);
        f = f.add_constant(3.0);
        assert_eq!(f.mean(), 3.0);
        assert_abs_diff_eq!(f.evaluate(0.0), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.evaluate(PI), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn compose_sqrt_of_one() {
        let grid = SpectralGrid::new(8).unwrap();
        let f = PeriodicField::constant(1.0, 8);
        let r = grid.compose_pointwise(&f, f64::sqrt).unwrap();
        assert_eq!(r.mean(), 1.0);
        assert_eq!(r.coeff_norm(), 1.0);
    }

    #[test]
    fn compose_cube_binomial() {
        // (1 + eps cos x)^3 = 1 + 3eps^2/2 + (3eps + 3eps^3/4) cos x
        //                     + (3eps^2/2) cos 2x + (eps^3/4) cos 3x
        let eps = 0.1;
        let grid = SpectralGrid::new(8).unwrap();
        let f = PeriodicField::cosine(8, 1, eps).add_constant(1.0);
        let c = grid.compose_pointwise(&f, |u| u * u * u).unwrap();
        assert_abs_diff_eq!(c.cos_coeff(0), 1.0 + 1.5 * eps * eps, epsilon = 1e-13);
        assert_abs_diff_eq!(
            c.cos_coeff(1),
            3.0 * eps + 0.75 * eps * eps * eps,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(c.cos_coeff(2), 1.5 * eps * eps, epsilon = 1e-13);
        assert_abs_diff_eq!(c.cos_coeff(3), 0.25 * eps * eps * eps, epsilon = 1e-13);
    }

    #[test]
    fn compose_reports_offending_index() {
        let grid = SpectralGrid::new(4).unwrap();
        // cos(x) - 0.5 is negative on part of the grid; sqrt must fail there.
        let f = PeriodicField::cosine(4, 1, 1.0).add_constant(-0.5);
        let err = grid.compose_pointwise(&f, f64::sqrt).unwrap_err();
        match err {
            Error::PointwiseEvaluation { index } => assert!(index < grid.size()),
            other => panic!("expected pointwise evaluation error, got {other}"),
        }
    }

    #[test]
    fn coth_matches_reference_and_saturates() {
        assert_abs_diff_eq!(coth(1.0), COTH_1, epsilon = 1e-15);
        assert_abs_diff_eq!(coth(2.0), 1.0373147207275481, epsilon = 1e-15);
        assert_eq!(coth(37.0), 1.0);
        // Continuity across the saturation threshold.
        assert!((coth(35.9) - 1.0).abs() < 1e-30);
    }

    #[test]
    fn geometry_validation() {
        assert!(StripGeometry::new(1.0, 1.0, 8).is_ok());
        assert!(StripGeometry::new(0.0, 1.0, 8).is_err());
        assert!(StripGeometry::new(1.0, -1.0, 8).is_err());
        assert!(StripGeometry::with_grid_size(1.0, 1.0, 8, 23).is_err()); // odd
        assert!(StripGeometry::with_grid_size(1.0, 1.0, 8, 22).is_err()); // < 3N
        let geom = StripGeometry::new(1.0, 1.0, 7).unwrap();
        assert!(geom.grid_size() >= 21 && geom.grid_size() % 2 == 0);
    }

    #[test]
    fn round_trip_zero_tail() {
        let grid = SpectralGrid::new(16).unwrap();
        let mut f = PeriodicField::zeros(16);
        f.cos[0] = 0.3;
        f.cos[2] = -1.2;
        f.cos[5] = 0.7;
        let values = grid.synthesize(&f).unwrap();
        let back = grid.analyze(&values, Parity::Even).unwrap();
        for k in 0..=16 {
            assert_abs_diff_eq!(back.cos_coeff(k), f.cos_coeff(k), epsilon = 1e-13);
        }
    }

    #[test]
    fn parity_violation_detected() {
        let grid = SpectralGrid::new(4).unwrap();
        let f = PeriodicField::sine(4, 1, 1.0);
        let values = grid.synthesize(&f).unwrap();
        assert!(matches!(
            grid.analyze(&values, Parity::Even),
            Err(Error::ParityViolation { .. })
        ));
    }
}
