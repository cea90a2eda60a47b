use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{HypothesisCheck, ValidationReport};
use crate::error::{FracError, Result};
use crate::fracops::RealLineGrid;

/// Matrix structure of `L(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `L(t) = l(t) I`.
    Scalar,
    /// `L(t) = l(t) diag(factors)`; every factor must be ≥ 1 so that
    /// `(L(t)u, u) ≥ l(t)|u|²`.
    Diagonal { factors: Vec<f64> },
}

/// Scalar profile `l(t) ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Profile {
    /// `height · min(1, dist(t, [-ϱ, ϱ]) / width)²`.
    SquaredDistance { width: f64, height: f64 },
    /// User-defined profile: piecewise-linear through `(t_i, l_i)`,
    /// constant beyond the table ends.
    Tabulated { t: Vec<f64>, l: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(default = "scalar_kind")]
    pub kind: PotentialKind,
    pub profile: Profile,
    /// The constant `c` of the sublevel-measure condition.
    pub threshold: f64,
    /// Half-width of the core interval `T = [-ϱ, ϱ]` where `L` vanishes.
    pub varrho: f64,
}

fn scalar_kind() -> PotentialKind {
    PotentialKind::Scalar
}

impl Default for PotentialSpec {
    /// Steep squared-distance well around `T = [-¼, ¼]` whose sublevel set
    /// `{l < c}` is small enough for the measure condition to hold.
    fn default() -> Self {
        Self {
            kind: PotentialKind::Scalar,
            profile: Profile::SquaredDistance {
                width: 0.2,
                height: 10.0,
            },
            threshold: 2.5,
            varrho: 0.25,
        }
    }
}

impl PotentialSpec {
    /// `l(t) = min(1, dist(t, [-1, 1]))²` with `c = ¼`, so that
    /// `{l < c} = (-3/2, 3/2)`.
    pub fn unit_distance_example() -> Self {
        Self {
            kind: PotentialKind::Scalar,
            profile: Profile::SquaredDistance {
                width: 1.0,
                height: 1.0,
            },
            threshold: 0.25,
            varrho: 1.0,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.varrho > 0.0 && self.varrho.is_finite()) {
            return Err(FracError::Config(format!(
                "core half-width must be positive, got {}",
                self.varrho
            )));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(FracError::Config(format!(
                "potential threshold must be positive, got {}",
                self.threshold
            )));
        }
        match &self.profile {
            Profile::SquaredDistance { width, height } => {
                if !(*width > 0.0 && *height > 0.0) {
                    return Err(FracError::Config(
                        "squared-distance width and height must be positive".into(),
                    ));
                }
            }
            Profile::Tabulated { t, l } => {
                if t.len() != l.len() || t.len() < 2 {
                    return Err(FracError::Config(
                        "tabulated profile needs matching t and l arrays of length >= 2".into(),
                    ));
                }
                if t.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(FracError::Config(
                        "tabulated profile abscissae must be strictly increasing".into(),
                    ));
                }
            }
        }
        if let PotentialKind::Diagonal { factors } = &self.kind {
            if factors.iter().any(|f| !(*f >= 1.0 && f.is_finite())) {
                return Err(FracError::Config(
                    "diagonal potential factors must be finite and >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// Scalar profile `l(t)`.
    pub fn l(&self, t: f64) -> f64 {
        match &self.profile {
            Profile::SquaredDistance { width, height } => {
                let d = (t.abs() - self.varrho).max(0.0);
                let x = (d / width).min(1.0);
                height * x * x
            }
            Profile::Tabulated { t: ts, l } => {
                let last = ts.len() - 1;
                if t <= ts[0] {
                    return l[0];
                }
                if t >= ts[last] {
                    return l[last];
                }
                let i = ts.partition_point(|x| *x <= t) - 1;
                let s = (t - ts[i]) / (ts[i + 1] - ts[i]);
                l[i] + s * (l[i + 1] - l[i])
            }
        }
    }

    fn factor(&self, c: usize) -> f64 {
        match &self.kind {
            PotentialKind::Scalar => 1.0,
            PotentialKind::Diagonal { factors } => factors[c % factors.len()],
        }
    }

    /// `(L(t)u, u)`.
    pub fn quad(&self, t: f64, u: &[f64]) -> f64 {
        let l = self.l(t);
        if l == 0.0 {
            return 0.0;
        }
        u.iter()
            .enumerate()
            .map(|(c, x)| self.factor(c) * x * x)
            .sum::<f64>()
            * l
    }

    /// `(L(t)u, v)`.
    pub fn pair(&self, t: f64, u: &[f64], v: &[f64]) -> f64 {
        let l = self.l(t);
        if l == 0.0 {
            return 0.0;
        }
        u.iter()
            .zip(v)
            .enumerate()
            .map(|(c, (x, y))| self.factor(c) * x * y)
            .sum::<f64>()
            * l
    }

    /// Diagonal of `L(t)` for vector dimension `n`.
    pub fn diagonal(&self, t: f64, n: usize) -> Vec<f64> {
        let l = self.l(t);
        (0..n).map(|c| l * self.factor(c)).collect()
    }

    /// `meas{l < c}` by the rectangle rule on the grid nodes.
    pub fn sublevel_measure(&self, grid: &RealLineGrid) -> f64 {
        let count = grid
            .nodes()
            .into_iter()
            .filter(|t| self.l(*t) < self.threshold)
            .count();
        count as f64 * grid.spacing()
    }
}

/// `L(t)` as an `n × n` symmetric matrix.
pub fn eval_potential(t: f64, spec: &PotentialSpec, n: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(spec.diagonal(t, n)))
}

/// Check nonnegativity, exact vanishing on `T`, that the interior of the
/// zero set is a single bounded interval, and the sublevel-measure
/// condition `meas{l < c} < 1/C∞²` for the given embedding constant.
pub fn validate_potential(
    spec: &PotentialSpec,
    grid: &RealLineGrid,
    c_infinity: f64,
) -> Result<ValidationReport> {
    spec.check()?;
    let mut checks = Vec::new();
    let fine: Vec<f64> = (0..4 * grid.num_points())
        .map(|j| -grid.halfwidth() + j as f64 * grid.spacing() / 4.0)
        .collect();

    let (tmin, lmin) = fine
        .iter()
        .map(|t| (*t, spec.l(*t)))
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    checks.push(HypothesisCheck {
        name: "potential_nonnegative".into(),
        passed: lmin >= 0.0,
        observed: lmin,
        witness: format!("t = {tmin}"),
        note: "minimum of l over a 4x refined grid".into(),
    });

    let core: Vec<f64> = (0..=1000)
        .map(|i| -spec.varrho + 2.0 * spec.varrho * i as f64 / 1000.0)
        .collect();
    let (tmax, lmax) = core
        .iter()
        .map(|t| (*t, spec.l(*t).abs()))
        .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    checks.push(HypothesisCheck {
        name: "potential_vanishes_on_core".into(),
        passed: lmax == 0.0,
        observed: lmax,
        witness: format!("t = {tmax}"),
        note: "max |l| over 1001 points of [-varrho, varrho]; must be exactly 0".into(),
    });

    // Zero set on the fine grid: one contiguous run away from the window edge.
    let zeros: Vec<usize> = (0..fine.len()).filter(|&j| spec.l(fine[j]) == 0.0).collect();
    let contiguous = zeros.windows(2).all(|w| w[1] == w[0] + 1);
    let interior = !zeros.is_empty() && zeros[0] > 0 && *zeros.last().unwrap() + 1 < fine.len();
    let (ja, jb) = zeros
        .first()
        .zip(zeros.last())
        .map(|(a, b)| (fine[*a], fine[*b]))
        .unwrap_or((f64::NAN, f64::NAN));
    checks.push(HypothesisCheck {
        name: "potential_zero_set".into(),
        passed: contiguous && interior && jb > ja,
        observed: jb - ja,
        witness: format!("zero set spans [{ja}, {jb}]"),
        note: "interior of l^-1(0) must be a nonempty bounded interval".into(),
    });

    let meas = spec.sublevel_measure(grid);
    let bound = 1.0 / (c_infinity * c_infinity);
    let edge = spec.l(grid.node(0)) < spec.threshold
        || spec.l(grid.node(grid.num_points() - 1)) < spec.threshold;
    checks.push(HypothesisCheck {
        name: "potential_sublevel_measure".into(),
        passed: !edge && meas < bound,
        observed: meas,
        witness: format!("meas{{l < c}} = {meas}, 1/C_inf^2 = {bound}"),
        note: if edge {
            "sublevel set reaches the window edge; its measure is not bounded".into()
        } else {
            format!("margin {}", bound - meas)
        },
    });
    Ok(ValidationReport { checks })
}
