//! Fourier-multiplier operators on the truncated real line.
//!
//! Convention (used by every routine and oracle in the crate): the unitary
//! transform with angular frequency,
//!
//! ```text
//! û(ω) = (2π)^{-1/2} ∫ u(t) e^{-iωt} dt,
//! ```
//!
//! discretized on the grid `t_j = -R + j h` as
//! `û_k = h (2π)^{-1/2} e^{-iω_k t_0} DFT_k(u)` with `Δω = 2π/(N h)`. Under
//! this convention `∫|u|² = Σ_k |û_k|² Δω` and the fractional quadratic form
//! is `Σ_k |ω_k|^{2α} |û_k|² Δω = (h/N) Σ_k |ω_k|^{2α} |DFT_k|²`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::grid::RealLineGrid;
use super::gridfn::GridFunction;
use super::special::{gamma, hurwitz_zeta};
use crate::error::{FracError, Result};

type PlanKey = (usize, bool);

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<PlanKey, Arc<dyn Fft<f64>>>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let (planner, plans) = &mut *guard;
    plans
        .entry((len, inverse))
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

fn forward_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Unnormalized inverse DFT followed by division by the length.
fn inverse_in_place(buf: &mut [Complex64]) {
    let n = buf.len() as f64;
    plan(buf.len(), true).process(buf);
    buf.iter_mut().for_each(|z| *z /= n);
}

/// Raw DFT of every component, component-major (`out[c][k]`).
fn raw_dft(u: &GridFunction) -> Vec<Vec<Complex64>> {
    (0..u.dim())
        .map(|c| {
            let mut buf: Vec<Complex64> = u
                .component(c)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect();
            forward_in_place(&mut buf);
            buf
        })
        .collect()
}

/// Rebuild a real grid function from per-component raw spectra, dropping
/// imaginary parts (round-off, or the unpaired Nyquist bin).
fn from_raw_dft(template: &GridFunction, mut spectra: Vec<Vec<Complex64>>) -> GridFunction {
    let mut out = GridFunction::zeros(*template.grid(), template.dim());
    for (c, buf) in spectra.iter_mut().enumerate() {
        inverse_in_place(buf);
        let re: Vec<f64> = buf.iter().map(|z| z.re).collect();
        out.set_component(c, &re);
    }
    out
}

pub fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FracError::Domain(format!(
            "fractional order must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Principal-branch symbol `(iω)^α = |ω|^α e^{i sign(ω) απ/2}`, zero at `ω = 0`.
pub fn lw_multiplier(grid: &RealLineGrid, alpha: f64) -> Vec<Complex64> {
    grid.frequencies()
        .into_iter()
        .map(|w| {
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(w.abs().powf(alpha), w.signum() * alpha * PI / 2.0)
            }
        })
        .collect()
}

/// `|ω_k|^s` at every grid frequency (`0` at `ω = 0`).
pub fn abs_power_multiplier(grid: &RealLineGrid, s: f64) -> Vec<f64> {
    grid.frequencies()
        .into_iter()
        .map(|w| if w == 0.0 { 0.0 } else { w.abs().powf(s) })
        .collect()
}

/// Unitary spectrum of a real-line grid function, one coefficient vector
/// per component.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: RealLineGrid,
    dim: usize,
    coefficients: Vec<Vec<Complex64>>,
}

impl Spectrum {
    pub fn of(u: &GridFunction) -> Result<Self> {
        let grid = *u.grid().as_line()?;
        let h = grid.spacing();
        let t0 = grid.node(0);
        let scale = h / (2.0 * PI).sqrt();
        let phases: Vec<Complex64> = grid
            .frequencies()
            .into_iter()
            .map(|w| Complex64::from_polar(scale, -w * t0))
            .collect();
        let coefficients = raw_dft(u)
            .into_iter()
            .map(|buf| buf.iter().zip(&phases).map(|(z, p)| z * p).collect())
            .collect();
        Ok(Self {
            grid,
            dim: u.dim(),
            coefficients,
        })
    }

    pub fn grid(&self) -> &RealLineGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.coefficients[c]
    }

    /// Multiply every component by a symbol sampled at the grid frequencies.
    pub fn multiply(&self, symbol: &[Complex64]) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .map(|buf| buf.iter().zip(symbol).map(|(z, m)| z * m).collect())
            .collect();
        Self {
            coefficients,
            ..self.clone()
        }
    }

    /// `Σ_k |û_k|² Δω` summed over components.
    pub fn energy(&self) -> f64 {
        let dw = self.grid.frequency_spacing();
        self.coefficients
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            * dw
    }

    /// Largest imaginary part of the inverse transform, relative to the
    /// largest real part. Near zero for spectra of real functions.
    pub fn imaginary_defect(&self) -> f64 {
        let (re, im) = self.inverse_parts();
        let re_max = re.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let im_max = im.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if re_max == 0.0 {
            im_max
        } else {
            im_max / re_max
        }
    }

    fn inverse_parts(&self) -> (Vec<f64>, Vec<f64>) {
        let h = self.grid.spacing();
        let t0 = self.grid.node(0);
        let scale = (2.0 * PI).sqrt() / h;
        let phases: Vec<Complex64> = self
            .grid
            .frequencies()
            .into_iter()
            .map(|w| Complex64::from_polar(scale, w * t0))
            .collect();
        let n = self.grid.num_points();
        let mut re = vec![0.0; n * self.dim];
        let mut im = vec![0.0; n * self.dim];
        for (c, buf) in self.coefficients.iter().enumerate() {
            let mut b: Vec<Complex64> = buf.iter().zip(&phases).map(|(z, p)| z * p).collect();
            inverse_in_place(&mut b);
            for (j, z) in b.iter().enumerate() {
                re[j * self.dim + c] = z.re;
                im[j * self.dim + c] = z.im;
            }
        }
        (re, im)
    }

    /// Inverse transform, keeping the real part.
    pub fn to_grid_function(&self) -> Result<GridFunction> {
        let (re, _) = self.inverse_parts();
        GridFunction::from_values(self.grid, self.dim, re)
    }
}

/// How the finite sample vector is continued outside `[-R, R)` when the
/// Liouville-Weyl derivative is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// Periodic continuation: the pure Fourier multiplier. Exact for
    /// trigonometric polynomials on the grid and the form the energy uses.
    #[default]
    Periodic,
    /// Continuation by zero: the multiplier result plus the removal of all
    /// periodic images of the (causal, slowly decaying) kernel. Approximates
    /// the operator on all of ℝ for functions that decay inside the window.
    Zero,
}

/// Left Liouville-Weyl derivative `_{-∞}D_x^α u`, applied componentwise.
pub fn liouville_weyl_left(u: &GridFunction, alpha: f64, ext: Extension) -> Result<GridFunction> {
    check_order(alpha)?;
    let grid = *u.grid().as_line()?;
    let symbol = lw_multiplier(&grid, alpha);
    let spectra = raw_dft(u)
        .into_iter()
        .map(|buf| buf.iter().zip(&symbol).map(|(z, m)| z * m).collect())
        .collect();
    let periodic = from_raw_dft(u, spectra);
    match ext {
        Extension::Periodic => Ok(periodic),
        Extension::Zero => {
            let corr = image_correction(u, &grid, alpha);
            periodic.axpy(1.0, &corr)
        }
    }
}

/// The periodic multiplier convolves with the periodized kernel
/// `Σ_k κ(z + kP)`, `P = 2R`. For `u` vanishing outside the window the
/// true operator only keeps `k = 0`. Writing `D^α u = (1/Γ(1-α)) ∫_0^∞
/// s^{-α} u'(x-s) ds` and integrating by parts, the images `k ≥ 1` sum to
/// `-(α/Γ(1-α)) Σ_{k≥1} (z + kP)^{-1-α}`, i.e. a Hurwitz zeta, and images
/// with `k ≤ -1` vanish by causality. The returned term cancels the images;
/// it is a linear convolution evaluated by FFT.
fn image_correction(u: &GridFunction, grid: &RealLineGrid, alpha: f64) -> GridFunction {
    let n = grid.num_points();
    let h = grid.spacing();
    let p = 2.0 * grid.halfwidth();
    let coef = alpha / gamma(1.0 - alpha) * h;
    let len = 4 * n;
    // kernel[m] = K((m - (n-1)) h) for m = 0..2n-1
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for (m, slot) in kernel.iter_mut().enumerate().take(2 * n - 1) {
        let z = (m as f64 - (n as f64 - 1.0)) * h;
        let k = p.powf(-1.0 - alpha) * hurwitz_zeta(1.0 + alpha, 1.0 + z / p);
        *slot = Complex64::new(coef * k, 0.0);
    }
    forward_in_place(&mut kernel);
    let mut out = GridFunction::zeros(*grid, u.dim());
    for c in 0..u.dim() {
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (slot, x) in buf.iter_mut().zip(u.component(c)) {
            *slot = Complex64::new(x, 0.0);
        }
        forward_in_place(&mut buf);
        buf.iter_mut().zip(&kernel).for_each(|(a, b)| *a *= b);
        inverse_in_place(&mut buf);
        let vals: Vec<f64> = buf[n - 1..2 * n - 1].iter().map(|z| z.re).collect();
        out.set_component(c, &vals);
    }
    out
}

/// Apply a real, even symbol `m_k` (sampled at the grid frequencies) to
/// every component.
pub fn apply_real_multiplier(u: &GridFunction, symbol: &[f64]) -> Result<GridFunction> {
    u.grid().as_line()?;
    let spectra = raw_dft(u)
        .into_iter()
        .map(|buf| buf.iter().zip(symbol).map(|(z, m)| z * m).collect())
        .collect();
    Ok(from_raw_dft(u, spectra))
}

/// `Σ_k m_k Re(û_k conj v̂_k) Δω` for a real weight `m`.
pub fn weighted_pairing(u: &GridFunction, v: &GridFunction, weight: &[f64]) -> Result<f64> {
    u.same_space(v)?;
    let grid = u.grid().as_line()?;
    let scale = grid.spacing() / grid.num_points() as f64;
    let a = raw_dft(u);
    let b = if std::ptr::eq(u, v) { a.clone() } else { raw_dft(v) };
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(&b) {
        for ((zx, zy), m) in x.iter().zip(y).zip(weight) {
            acc += m * (zx.re * zy.re + zx.im * zy.im);
        }
    }
    Ok(acc * scale)
}

/// `∫ |ω|^{2α} |û(ω)|² dω`, which equals `∫ |_{-∞}D^α u|²` by Plancherel.
pub fn quadratic_form_alpha(u: &GridFunction, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    let grid = u.grid().as_line()?;
    weighted_pairing(u, u, &abs_power_multiplier(grid, 2.0 * alpha))
}

/// Bilinear form behind [`quadratic_form_alpha`].
pub fn spectral_pairing(u: &GridFunction, v: &GridFunction, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    let grid = u.grid().as_line()?;
    weighted_pairing(u, v, &abs_power_multiplier(grid, 2.0 * alpha))
}

/// Largest `|u|` over the outermost `1/16` of the window on each side,
/// relative to `sup |u|`. Large values mean the truncation is not
/// representative of a decaying function on ℝ.
pub fn boundary_ratio(u: &GridFunction) -> f64 {
    let mags = u.magnitudes();
    let sup = mags.iter().fold(0.0f64, |m, x| m.max(*x));
    if sup == 0.0 {
        return 0.0;
    }
    let band = (mags.len() / 16).max(1);
    let edge = mags[..band]
        .iter()
        .chain(&mags[mags.len() - band..])
        .fold(0.0f64, |m, x| m.max(*x));
    edge / sup
}
