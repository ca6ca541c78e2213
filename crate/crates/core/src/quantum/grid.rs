use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex wavefunction sampled on the periodic box `[-L, L)^d`.
#[derive(Clone, Debug)]
pub struct WaveGrid {
    pub d: usize,
    pub l: f64,
    pub n: usize,
    /// Row-major; the first axis varies slowest.
    pub values: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub d: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl GridShape {
    pub fn new(d: usize, l: f64, n: usize) -> Result<Self> {
        if d == 0 || d > 2 {
            return Err(Error::InvalidArgument(format!("wave grids support d = 1 or 2, got {d}")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidArgument(format!("half-width L must be positive, got {l}")));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("N must be a power of two >= 4, got {n}")));
        }
        Ok(Self { d, l, n })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Volume element of the Riemann sum.
    pub fn cell(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    pub fn coords(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|k| -self.l + k as f64 * dx).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        let dk = std::f64::consts::TAU / (2.0 * self.l);
        (0..n).map(|k| if k < n / 2 { k } else { k - n } as f64 * dk).collect()
    }

    /// Multi-index of flat position `idx`.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        if self.d == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }

    /// Evaluates `f` at every node, passing the coordinates.
    pub fn map_nodes<T>(&self, mut f: impl FnMut(&[f64]) -> T) -> Vec<T> {
        let x = self.coords();
        let mut buf = vec![0.0; self.d];
        (0..self.len())
            .map(|idx| {
                let m = self.unflatten(idx);
                for (ax, slot) in buf.iter_mut().enumerate() {
                    *slot = x[m[ax]];
                }
                f(&buf)
            })
            .collect()
    }

    /// Evaluates `f` at every wavenumber node (FFT order).
    pub fn map_modes<T>(&self, mut f: impl FnMut(&[f64]) -> T) -> Vec<T> {
        let k = self.wavenumbers();
        let mut buf = vec![0.0; self.d];
        (0..self.len())
            .map(|idx| {
                let m = self.unflatten(idx);
                for (ax, slot) in buf.iter_mut().enumerate() {
                    *slot = k[m[ax]];
                }
                f(&buf)
            })
            .collect()
    }
}

impl WaveGrid {
    pub fn shape(&self) -> GridShape {
        GridShape { d: self.d, l: self.l, n: self.n }
    }

    pub fn from_fn(shape: GridShape, f: impl FnMut(&[f64]) -> Complex64) -> Self {
        Self { d: shape.d, l: shape.l, n: shape.n, values: shape.map_nodes(f) }
    }

    /// Gaussian `(π w²)^{-d/4} exp(-|x-c|²/(2w²) + i k·x)`; `w = 1`, `c = k = 0`
    /// is the oscillator ground state.
    pub fn gaussian(shape: GridShape, center: &[f64], width: f64, momentum: &[f64]) -> Result<Self> {
        crate::error::check_dim(shape.d, center.len())?;
        crate::error::check_dim(shape.d, momentum.len())?;
        let norm = (std::f64::consts::PI * width * width).powf(-(shape.d as f64) / 4.0);
        Ok(Self::from_fn(shape, |x| {
            let mut r2 = 0.0;
            let mut phase = 0.0;
            for i in 0..x.len() {
                r2 += (x[i] - center[i]).powi(2);
                phase += momentum[i] * x[i];
            }
            Complex64::from_polar(norm * (-r2 / (2.0 * width * width)).exp(), phase)
        }))
    }

    pub fn ground_state(shape: GridShape) -> Self {
        let zero = vec![0.0; shape.d];
        Self::gaussian(shape, &zero, 1.0, &zero).expect("dimensions agree")
    }

    pub fn validate(&self) -> Result<()> {
        let shape = GridShape::new(self.d, self.l, self.n)?;
        if self.values.len() != shape.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, found {}",
                shape.len(),
                self.values.len()
            )));
        }
        if self.values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("wavefunction"));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.shape().cell()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero or non-finite state".into()));
        }
        self.values.iter_mut().for_each(|z| *z /= n);
        Ok(())
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(())
    }

    /// `⟨self, other⟩`, antilinear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.shape().cell())
    }

    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.shape().cell()).sqrt())
    }

    /// Mean position per axis (normalized by the mass).
    pub fn mean_position(&self) -> Vec<f64> {
        let shape = self.shape();
        let x = shape.coords();
        let mut acc = vec![0.0; self.d];
        let mut mass = 0.0;
        for (idx, z) in self.values.iter().enumerate() {
            let m = shape.unflatten(idx);
            let w = z.norm_sqr();
            mass += w;
            for ax in 0..self.d {
                acc[ax] += w * x[m[ax]];
            }
        }
        acc.iter().map(|a| a / mass).collect()
    }
}

/// `min_θ ‖ψ₁ − e^{iθ}ψ₂‖`, which is `sqrt(2 − 2|⟨ψ₁,ψ₂⟩|)` for unit states.
/// Evaluated at the optimal phase directly to avoid the cancellation in
/// the closed form.
pub fn distance_phase_invariant(psi1: &WaveGrid, psi2: &WaveGrid) -> Result<f64> {
    let ip = psi2.inner(psi1)?;
    let rot = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let s: f64 = psi1.values.iter().zip(&psi2.values).map(|(a, b)| (a - rot * b).norm_sqr()).sum();
    Ok((s * psi1.shape().cell()).sqrt())
}

/// Cached forward/inverse plans for one grid shape. Plans are shared
/// read-only, so a `Spectral` may be used from several threads.
#[derive(Clone)]
pub struct Spectral {
    shape: GridShape,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(shape: GridShape) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            shape,
            forward: planner.plan_fft_forward(shape.n),
            inverse: planner.plan_fft_inverse(shape.n),
        }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    /// Unnormalized forward transform, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(data, &self.forward);
    }

    /// Inverse transform including the `1/N^d` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(data, &self.inverse);
        let k = 1.0 / self.shape.len() as f64;
        data.iter_mut().for_each(|z| *z *= k);
    }

    fn apply(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.shape.n;
        plan.process(data);
        if self.shape.d == 2 {
            transpose(data, n);
            plan.process(data);
            transpose(data, n);
        }
    }

    /// Applies a diagonal multiplier in frequency space.
    pub fn multiply_modes(&self, data: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward(data);
        data.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
        self.inverse(data);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Fraction of mass on nodes with `|x_i| >= 0.9 L` for some axis, and on modes
/// with `|k_i| >= 0.9 k_max`; the guards both fail above `threshold`.
pub(crate) struct AliasGuard {
    outer_nodes: Vec<usize>,
    outer_modes: Vec<usize>,
    pub threshold: f64,
}

impl AliasGuard {
    pub const DEFAULT_THRESHOLD: f64 = 1e-8;

    pub fn new(shape: GridShape) -> Self {
        let l = shape.l;
        let kmax = std::f64::consts::PI / shape.dx();
        let node_out: Vec<bool> = shape.map_nodes(|x| x.iter().any(|v| v.abs() >= 0.9 * l));
        let mode_out: Vec<bool> = shape.map_modes(|k| k.iter().any(|v| v.abs() >= 0.9 * kmax));
        let pick = |v: Vec<bool>| v.iter().enumerate().filter(|(_, &o)| o).map(|(i, _)| i).collect();
        Self { outer_nodes: pick(node_out), outer_modes: pick(mode_out), threshold: Self::DEFAULT_THRESHOLD }
    }

    fn fraction(idx: &[usize], data: &[Complex64]) -> f64 {
        let total: f64 = data.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        idx.iter().map(|&i| data[i].norm_sqr()).sum::<f64>() / total
    }

    pub fn check_position(&self, data: &[Complex64]) -> Result<()> {
        let mass = Self::fraction(&self.outer_nodes, data);
        if mass > self.threshold {
            return Err(Error::Aliasing { domain: "position", mass });
        }
        Ok(())
    }

    /// `data` holds forward-transformed samples.
    pub fn check_frequency(&self, data: &[Complex64]) -> Result<()> {
        let mass = Self::fraction(&self.outer_modes, data);
        if mass > self.threshold {
            return Err(Error::Aliasing { domain: "frequency", mass });
        }
        Ok(())
    }

    pub fn check(&self, spectral: &Spectral, data: &[Complex64]) -> Result<()> {
        self.check_position(data)?;
        let mut buf = data.to_vec();
        spectral.forward(&mut buf);
        self.check_frequency(&buf)
    }
}
