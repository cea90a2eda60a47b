//! Numerical mountain pass: the geometry `(ρ, η, ψ, σ₀, e)`, the
//! `λ`-independent upper bound `c̃`, and a path-deformation search for the
//! min-max level
//!
//! ```text
//! c = inf_{g ∈ Γ} max_{s ∈ [0,1]} I(g(s)),   Γ = { g : g(0) = 0, g(1) = e }.
//! ```
//!
//! Any discrete path only bounds the level from above; the reported level
//! is backed by a residual test at the path maximum and a certified path
//! whose other nodes all lie below it.

mod geometry;
mod solver;

pub use geometry::{
    bvp_ctilde_bound, construct_e, construct_e_bvp, construct_e_with, ctilde_bound, estimate_rho_eta,
    polynomial_bump, ray_maximum, ray_peak, rho_eta_from_constants, rho_eta_scan, GeometryOptions,
    MountainPassSetup, SIGMA_CAP,
};
pub use solver::{
    bvp_solve, mpa_solve, mpa_solve_from, solve_problem, MpaConfig, PathState, PathSummary, SolveResult,
    StepRule, StopReason, TraceEntry,
};
