//! Variational solvers for fractional Hamiltonian systems with a
//! parameter-dependent, positive semi-definite potential.
//!
//! The crate discretizes the energy
//!
//! ```text
//! I_λ(u) = ½ ∫ |D^α u|² + ½ λ ∫ (L(t) u, u) − ∫ W(t, u)
//! ```
//!
//! on a truncated real line, finds a mountain-pass critical point `u_λ`,
//! solves the limiting Dirichlet problem on the core interval where `L`
//! vanishes, and measures how `u_λ` concentrates on that interval as `λ`
//! grows.
//!
//! Module map:
//!
//! * [`fracops`] grids, grid functions, spectral Liouville-Weyl operators,
//!   Grünwald-Letnikov operators and quadrature.
//! * [`spaces`] norms, inner products, embedding constants and the
//!   randomized inequality verifier.
//! * [`problem`] potential and nonlinearity families with their validators.
//! * [`functional`] the line and interval energies, derivatives and
//!   gradient representatives.
//! * [`mpa`] mountain-pass geometry and the path-deformation solver.
//! * [`runner`] configuration, λ-sweeps, verification campaigns and output.

pub mod error;
pub mod exec;
pub mod fracops;
pub mod functional;
pub mod mpa;
pub mod problem;
pub mod runner;
pub mod spaces;

pub use error::{FracError, Result};
pub use exec::Exec;
