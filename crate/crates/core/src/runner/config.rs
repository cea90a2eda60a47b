use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{FracError, Result};
use crate::fracops::RealLineGrid;
use crate::functional::{BvpSpec, ProblemSpec};
use crate::mpa::{GeometryOptions, MpaConfig};
use crate::problem::{NonlinearitySpec, PotentialSpec};

/// The only config layout this build understands.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    pub alpha: f64,
    pub lambda: f64,
    pub dim: usize,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            alpha: 0.75,
            lambda: 10.0,
            dim: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// The line is truncated to `[-halfwidth, halfwidth)`.
    pub halfwidth: f64,
    /// Number of nodes (a power of two keeps the transforms fast).
    pub points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            halfwidth: 20.0,
            points: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    /// Half-width of the bump `ψ`; must be below `varrho`.
    pub tau: f64,
    pub epsilon_c: Option<f64>,
    pub c_eps: Option<f64>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            tau: 0.2,
            epsilon_c: None,
            c_eps: None,
        }
    }
}

impl GeometrySection {
    pub fn options(&self) -> GeometryOptions {
        GeometryOptions {
            epsilon_c: self.epsilon_c,
            c_eps: self.c_eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BvpSection {
    /// Nodes on `[-varrho, varrho]`, endpoints included.
    pub points: usize,
}

impl Default for BvpSection {
    fn default() -> Self {
        Self { points: 257 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub lambdas: Vec<f64>,
    /// Solve every `λ` from `e` instead of continuing from the previous
    /// solution; records then run in parallel.
    pub cold: bool,
    /// Abort when tail mass or distance to the interval solution fails to
    /// decrease.
    pub assert_monotone: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            lambdas: vec![1.0, 10.0, 100.0, 1000.0],
            cold: false,
            assert_monotone: true,
        }
    }
}

/// Sample counts of a verification campaign; zero skips a block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    /// Random functions per embedding inequality.
    pub samples: usize,
    /// Random points for the potential/nonlinearity validators.
    pub hypothesis_budget: usize,
    /// Random points on the `ρ`-sphere for the energy floor.
    pub geometry_samples: usize,
    /// Random functions for the `H` identity.
    pub identity_samples: usize,
    /// Extra samples for the Monte-Carlo sup-constant estimate.
    pub estimate_samples: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            samples: 1000,
            hypothesis_budget: 1000,
            geometry_samples: 200,
            identity_samples: 100,
            estimate_samples: 0,
        }
    }
}

impl VerifySection {
    pub fn zero() -> Self {
        Self {
            samples: 0,
            hypothesis_budget: 0,
            geometry_samples: 0,
            identity_samples: 0,
            estimate_samples: 0,
        }
    }
}

/// A complete run description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Seeds every random draw (samples, restarts).
    pub seed: u64,
    pub problem: ProblemSection,
    pub grid: GridSection,
    pub potential: PotentialSpec,
    pub nonlinearity: NonlinearitySpec,
    pub geometry: GeometrySection,
    pub bvp: BvpSection,
    pub mpa: MpaConfig,
    pub sweep: SweepSection,
    pub verify: VerifySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: 20240611,
            problem: ProblemSection::default(),
            grid: GridSection::default(),
            potential: PotentialSpec::default(),
            nonlinearity: NonlinearitySpec::default(),
            geometry: GeometrySection::default(),
            bvp: BvpSection::default(),
            mpa: MpaConfig::default(),
            sweep: SweepSection::default(),
            verify: VerifySection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| FracError::Config(format!("cannot render config: {e}")))
    }

    pub fn check(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FracError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.problem_spec()?.check()?;
        self.mpa.check()?;
        if self.bvp.points < 3 {
            return Err(FracError::Config("bvp.points must be at least 3".into()));
        }
        Ok(())
    }

    /// Set the seed everywhere it is consumed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.mpa.seed = seed;
        self
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        Ok(ProblemSpec {
            alpha: self.problem.alpha,
            lambda: self.problem.lambda,
            potential: self.potential.clone(),
            nonlinearity: self.nonlinearity.clone(),
            grid: RealLineGrid::new(self.grid.halfwidth, self.grid.points)?,
            dim: self.problem.dim,
        })
    }

    pub fn bvp_spec(&self) -> Result<BvpSpec> {
        BvpSpec::on_core(
            self.problem.alpha,
            self.potential.varrho,
            self.bvp.points,
            self.nonlinearity.clone(),
            self.problem.dim,
        )
    }

    /// SHA-256 of the canonical JSON form (sorted keys).
    pub fn hash(&self) -> Result<String> {
        hash_canonical(self)
    }
}

/// SHA-256 hex digest of a value's canonical JSON (object keys sorted).
pub fn hash_canonical<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let text = serde_json::to_string(&v)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn round_trip_keeps_hash() {
        let cfg = RunConfig::default().with_seed(7);
        let text = cfg.to_toml_string().unwrap();
        let back = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash().unwrap(), cfg.hash().unwrap());
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(RunConfig::from_toml_str("bogus = 1").is_err());
        assert!(matches!(
            RunConfig::from_toml_str("schema_version = 2"),
            Err(FracError::Config(_))
        ));
    }

    #[test]
    fn parses_families() {
        let text = r#"
            schema_version = 1
            [problem]
            lambda = 100.0
            [nonlinearity.family]
            family = "oscillatory"
            p = 4.0
            epsilon = 0.5
            [nonlinearity.weight]
            profile = "constant"
            g = 2.0
            [mpa]
            metric = "h-alpha"
            step_rule = "node-descent"
        "#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.nonlinearity, NonlinearitySpec::oscillatory(4.0, 0.5, 2.0));
        assert_eq!(cfg.problem.lambda, 100.0);
        assert_eq!(cfg.mpa.metric, crate::functional::Metric::HAlpha);
    }
}
