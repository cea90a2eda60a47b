//! Replayable random test functions.
//!
//! Sample `id` under seed `s` is drawn from its own ChaCha stream
//! `(s, id)`, so any sample can be regenerated in isolation and samples can
//! be drawn in parallel without changing their values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::fracops::{GridFunction, IntervalGrid, RealLineGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFamily {
    GaussianMixture,
    Bump,
    BandLimited,
}

impl SampleFamily {
    pub const ALL: [SampleFamily; 3] = [
        SampleFamily::GaussianMixture,
        SampleFamily::Bump,
        SampleFamily::BandLimited,
    ];
}

/// A localized term: Gaussian `exp(-(t-center)²/(2 width²))` or polynomial
/// bump `(1 - ((t-center)/width)²)³₊`, times the vector `amp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub center: f64,
    pub width: f64,
    pub amp: Vec<f64>,
}

/// A single Fourier mode with integer wavenumber `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: usize,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Sample {
    Zero,
    GaussianMixture { terms: Vec<Term> },
    Bump { terms: Vec<Term> },
    /// On the line: `Σ cos_k cos(k Δω t) + sin_k sin(k Δω t)`; on an
    /// interval `[a, b]`: `Σ sin_k sin(kπ(t-a)/(b-a))`.
    BandLimited { modes: Vec<Mode> },
}

fn bump(x: f64) -> f64 {
    let y = 1.0 - x * x;
    if y > 0.0 {
        y * y * y
    } else {
        0.0
    }
}

fn normal_vec(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl Sample {
    fn eval(&self, t: f64, dim: usize, out: &mut [f64], line_dw: Option<f64>, interval: Option<(f64, f64)>) {
        out.iter_mut().for_each(|x| *x = 0.0);
        match self {
            Sample::Zero => {}
            Sample::GaussianMixture { terms } => {
                for term in terms {
                    let z = (t - term.center) / term.width;
                    let s = (-0.5 * z * z).exp();
                    for c in 0..dim {
                        out[c] += term.amp[c] * s;
                    }
                }
            }
            Sample::Bump { terms } => {
                for term in terms {
                    let s = bump((t - term.center) / term.width);
                    for c in 0..dim {
                        out[c] += term.amp[c] * s;
                    }
                }
            }
            Sample::BandLimited { modes } => {
                for m in modes {
                    if let Some(dw) = line_dw {
                        let phase = m.k as f64 * dw * t;
                        let (s, co) = phase.sin_cos();
                        for c in 0..dim {
                            out[c] += m.cos[c] * co + m.sin[c] * s;
                        }
                    } else if let Some((a, b)) = interval {
                        let s = (m.k as f64 * std::f64::consts::PI * (t - a) / (b - a)).sin();
                        for c in 0..dim {
                            out[c] += m.sin[c] * s;
                        }
                    }
                }
            }
        }
    }

    pub fn render_line(&self, grid: &RealLineGrid, dim: usize) -> GridFunction {
        let dw = grid.frequency_spacing();
        let mut values = vec![0.0; grid.num_points() * dim];
        for (j, chunk) in values.chunks_mut(dim).enumerate() {
            self.eval(grid.node(j), dim, chunk, Some(dw), None);
        }
        GridFunction::from_values(*grid, dim, values).expect("sample values are finite")
    }

    /// Render on an interval and enforce homogeneous Dirichlet data: the
    /// Gaussian family is multiplied by the parabola `4(t-a)(b-t)/(b-a)²`.
    pub fn render_interval(&self, grid: &IntervalGrid, dim: usize) -> GridFunction {
        let (a, b) = (grid.a(), grid.b());
        let mut values = vec![0.0; grid.num_points() * dim];
        for (j, chunk) in values.chunks_mut(dim).enumerate() {
            let t = grid.node(j);
            self.eval(t, dim, chunk, None, Some((a, b)));
            if matches!(self, Sample::GaussianMixture { .. }) {
                let w = 4.0 * (t - a) * (b - t) / ((b - a) * (b - a));
                chunk.iter_mut().for_each(|x| *x *= w);
            }
        }
        GridFunction::from_values(*grid, dim, values)
            .and_then(|u| u.into_dirichlet())
            .expect("sample values are finite")
    }
}

/// Random line sample localized in the middle 30% of the window.
pub fn draw_line_sample(seed: u64, id: u64, family: SampleFamily, grid: &RealLineGrid, dim: usize) -> Sample {
    let mut rng = stream(seed, id);
    let span = 0.15 * grid.halfwidth();
    match family {
        SampleFamily::GaussianMixture | SampleFamily::Bump => {
            let count = rng.random_range(1..=3);
            let scale = 1.0 / (count as f64).sqrt();
            let terms = (0..count)
                .map(|_| Term {
                    center: rng.random_range(-span..span),
                    width: 10f64.powf(rng.random_range(-1.3..0.5)),
                    amp: normal_vec(&mut rng, dim, scale),
                })
                .collect();
            if family == SampleFamily::Bump {
                Sample::Bump { terms }
            } else {
                Sample::GaussianMixture { terms }
            }
        }
        SampleFamily::BandLimited => {
            let kcap = grid.num_points() / 2 - 1;
            let kmax = (10f64.powf(rng.random_range(0.3..2.5)) as usize).clamp(1, kcap);
            let count = rng.random_range(1..=8);
            let scale = 1.0 / (count as f64).sqrt();
            let modes = (0..count)
                .map(|_| Mode {
                    k: rng.random_range(1..=kmax),
                    cos: normal_vec(&mut rng, dim, scale),
                    sin: normal_vec(&mut rng, dim, scale),
                })
                .collect();
            Sample::BandLimited { modes }
        }
    }
}

/// Random interval sample vanishing at both endpoints.
pub fn draw_interval_sample(seed: u64, id: u64, family: SampleFamily, grid: &IntervalGrid, dim: usize) -> Sample {
    let mut rng = stream(seed, id);
    let (a, b) = (grid.a(), grid.b());
    let len = b - a;
    let count = rng.random_range(1..=3);
    let scale = 1.0 / (count as f64).sqrt();
    match family {
        SampleFamily::GaussianMixture => Sample::GaussianMixture {
            terms: (0..count)
                .map(|_| Term {
                    center: rng.random_range(a + 0.2 * len..b - 0.2 * len),
                    width: len * 10f64.powf(rng.random_range(-1.5..-0.5)),
                    amp: normal_vec(&mut rng, dim, scale),
                })
                .collect(),
        },
        SampleFamily::Bump => Sample::Bump {
            terms: (0..count)
                .map(|_| {
                    let center = rng.random_range(a + 0.1 * len..b - 0.1 * len);
                    let room = (center - a).min(b - center);
                    Term {
                        center,
                        width: room * rng.random_range(0.2..1.0),
                        amp: normal_vec(&mut rng, dim, scale),
                    }
                })
                .collect(),
        },
        SampleFamily::BandLimited => {
            let kcap = grid.num_points().saturating_sub(2).max(1);
            let kmax = (10f64.powf(rng.random_range(0.0..1.5)) as usize).clamp(1, kcap);
            let count = rng.random_range(1..=8);
            let scale = 1.0 / (count as f64).sqrt();
            Sample::BandLimited {
                modes: (0..count)
                    .map(|_| Mode {
                        k: rng.random_range(1..=kmax),
                        cos: vec![0.0; dim],
                        sin: normal_vec(&mut rng, dim, scale),
                    })
                    .collect(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_exact() {
        let g = RealLineGrid::new(20.0, 1024).unwrap();
        for fam in SampleFamily::ALL {
            let a = draw_line_sample(7, 42, fam, &g, 2);
            let b = draw_line_sample(7, 42, fam, &g, 2);
            assert_eq!(a, b);
            let json = serde_json::to_string(&a).unwrap();
            let c: Sample = serde_json::from_str(&json).unwrap();
            assert_eq!(a.render_line(&g, 2), c.render_line(&g, 2));
        }
    }

    #[test]
    fn interval_samples_are_dirichlet() {
        let g = IntervalGrid::new(-0.5, 0.5, 65).unwrap();
        for (id, fam) in SampleFamily::ALL.into_iter().enumerate() {
            let u = draw_interval_sample(1, id as u64, fam, &g, 1).render_interval(&g, 1);
            u.require_dirichlet().unwrap();
            assert!(!u.is_zero());
        }
    }
}
