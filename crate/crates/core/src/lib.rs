//! Pseudo-spectral solver and continuation toolkit for steady periodic
//! hydroelastic waves on finite-depth water with constant vorticity.
//!
//! The free-boundary problem is reduced to a quasilinear pseudodifferential
//! equation for the even, zero-mean surface elevation `w` on a conformal
//! strip. This crate provides:
//!
//! * [`spectral`] — truncated Fourier fields, strip Fourier multipliers
//!   (periodic Hilbert transform, Dirichlet–Neumann), dealiased products;
//! * [`elasticity`] — stored-energy models with rest-state/convexity
//!   validation, membrane stretch/bend geometry, deformation pressure;
//! * [`residual`] — the reduced nonlinear operator, its linearization about
//!   laminar flow, the dispersion relation, dense Jacobians;
//! * [`bifurcation`] — closed-form bifurcation thresholds, resonance
//!   vorticities, kernel classification, transversality and nondegeneracy
//!   diagnostics;
//! * [`continuation`] — damped Newton corrector, pseudo-arclength tracing of
//!   primary branches, detection and tracing of secondary (two-mode ripple)
//!   branches, CSV export/import;
//! * [`flowfield`] — reconstruction of the conformal map, stream function and
//!   physical velocities, critical layers and stagnation points.
//!
//! With the default `parallel` feature, Jacobian columns and flow-field
//! columns are assembled with rayon; disabling the feature falls back to
//! identical sequential loops.

pub mod bifurcation;
pub mod continuation;
pub mod elasticity;
mod error;
pub mod flowfield;
mod par;
pub mod residual;
pub mod spectral;

pub use error::{Error, Result};
