//! Discrete fractional operators.
//!
//! Two discretizations live here. On the truncated real line
//! `[-R, R)` the Liouville-Weyl derivative is a Fourier multiplier
//! `(iω)^α` applied through the FFT. On a finite interval `[a, b]` the left
//! Riemann-Liouville derivative is the lower-triangular Grünwald-Letnikov
//! matrix. Both share the trapezoid rule in [`quadrature`].

mod gl;
mod grid;
mod gridfn;
pub mod quadrature;
pub mod special;
mod spectral;

pub(crate) use gl::interior;
pub use gl::{gl_matrix, gl_weights, grunwald_left_rl, interval_stiffness, StiffnessMatrix};
pub use grid::{Grid, IntervalGrid, RealLineGrid};
pub use gridfn::GridFunction;
pub use quadrature::{integrate, integrate_scalar, quadrature_weights, unit_weights, weighted_sum};
pub use spectral::{
    abs_power_multiplier, apply_real_multiplier, boundary_ratio, check_order, liouville_weyl_left,
    lw_multiplier, quadratic_form_alpha, spectral_pairing, weighted_pairing, Extension, Spectrum,
};
