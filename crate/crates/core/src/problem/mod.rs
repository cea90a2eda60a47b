//! Potential and nonlinearity families, with sampling validators for the
//! structural hypotheses the existence theory relies on.
//!
//! Validators sample; they cannot prove asymptotic statements. A passing
//! check means the family is *consistent with* the hypothesis on the fixed
//! sampling windows documented on each check.

mod nonlinearity;
mod potential;

pub use nonlinearity::{
    eval_grad_w, eval_h, eval_w, growth_constant, validate_nonlinearity, NonlinearityFamily,
    NonlinearitySpec, WeightProfile,
};
pub use potential::{eval_potential, validate_potential, PotentialKind, PotentialSpec, Profile};

use serde::{Deserialize, Serialize};

use crate::error::FracError;

/// Outcome of one named hypothesis check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    /// The quantity the check is about (tightest constant, measure, …).
    pub observed: f64,
    /// Sample point where the check failed or was tightest.
    pub witness: String,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<HypothesisCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// First failing check as a structured error.
    pub fn into_result(self) -> crate::Result<Self> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(FracError::Hypothesis {
                name: c.name.clone(),
                witness: c.witness.clone(),
            }),
            None => Ok(self),
        }
    }
}
