use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridShape, WaveGrid};
use crate::error::{Error, Result};

/// Coefficients on the tensor Hermite basis `φ_{j1}(x1)⋯φ_{jd}(xd)`,
/// indexed row-major by `j` with every `j_i < order`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HermiteCoeffs {
    pub d: usize,
    pub order: usize,
    pub coeffs: Vec<Complex64>,
}

/// Hermite functions `φ_0..φ_{m-1}` at `x`, by the normalized three-term
/// recurrence `φ_{j+1} = sqrt(2/(j+1)) x φ_j − sqrt(j/(j+1)) φ_{j−1}`.
pub fn hermite_functions(m: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m);
    if m == 0 {
        return out;
    }
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(phi0);
    if m > 1 {
        out.push(2f64.sqrt() * x * phi0);
    }
    for j in 1..m.saturating_sub(1) {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

impl HermiteCoeffs {
    pub fn zero(d: usize, order: usize) -> Self {
        Self { d, order, coeffs: vec![Complex64::new(0.0, 0.0); order.pow(d as u32)] }
    }

    pub fn basis(d: usize, order: usize, j: &[usize]) -> Result<Self> {
        crate::error::check_dim(d, j.len())?;
        if j.iter().any(|&ji| ji >= order) {
            return Err(Error::InvalidArgument(format!("index {j:?} outside order {order}")));
        }
        let mut c = Self::zero(d, order);
        let idx = j.iter().fold(0, |acc, &ji| acc * order + ji);
        c.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.len() != self.order.pow(self.d as u32) {
            return Err(Error::InvalidArgument("coefficient count does not match order".into()));
        }
        if self.norm_sqr() > 1.0 + 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "coefficient mass {} exceeds 1",
                self.norm_sqr()
            )));
        }
        Ok(())
    }

    /// Total degree `j_1 + ... + j_d` of flat index `idx`.
    fn degree(&self, idx: usize) -> usize {
        if self.d == 1 {
            idx
        } else {
            idx / self.order + idx % self.order
        }
    }
}

/// Oscillator evolution `e^{it(Δ−|x|²)/2}` in its eigenbasis:
/// `c_j ↦ e^{−it(|j| + d/2)} c_j`.
pub fn hermite_rotation_oracle(c: &HermiteCoeffs, t: f64) -> HermiteCoeffs {
    let half_d = c.d as f64 / 2.0;
    let coeffs = c
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, z)| z * Complex64::from_polar(1.0, -t * (c.degree(idx) as f64 + half_d)))
        .collect();
    HermiteCoeffs { d: c.d, order: c.order, coeffs }
}

fn check_order(shape: GridShape, order: usize) -> Result<()> {
    if order == 0 || order > shape.n / 4 {
        return Err(Error::Resolution { order, limit: shape.n / 4 });
    }
    Ok(())
}

// table[k][j] = φ_j(x_k)
fn table(shape: GridShape, order: usize) -> Vec<Vec<f64>> {
    shape.coords().iter().map(|&x| hermite_functions(order, x)).collect()
}

/// Projection of `psi` onto the first `order` Hermite functions per axis.
pub fn hermite_analyze(psi: &WaveGrid, order: usize) -> Result<HermiteCoeffs> {
    psi.validate()?;
    let shape = psi.shape();
    check_order(shape, order)?;
    let tab = table(shape, order);
    let cell = shape.cell();
    let mut out = HermiteCoeffs::zero(psi.d, order);
    match psi.d {
        1 => {
            for (k, z) in psi.values.iter().enumerate() {
                for j in 0..order {
                    out.coeffs[j] += z * tab[k][j];
                }
            }
        }
        _ => {
            let n = shape.n;
            // contract the second axis first: partial[k1][j2]
            let mut partial = vec![Complex64::new(0.0, 0.0); n * order];
            for k1 in 0..n {
                for k2 in 0..n {
                    let z = psi.values[k1 * n + k2];
                    for j2 in 0..order {
                        partial[k1 * order + j2] += z * tab[k2][j2];
                    }
                }
            }
            for k1 in 0..n {
                for j1 in 0..order {
                    let w = tab[k1][j1];
                    for j2 in 0..order {
                        out.coeffs[j1 * order + j2] += partial[k1 * order + j2] * w;
                    }
                }
            }
        }
    }
    out.coeffs.iter_mut().for_each(|z| *z *= cell);
    Ok(out)
}

/// Inverse of [`hermite_analyze`] on band-limited states.
pub fn hermite_synthesize(c: &HermiteCoeffs, shape: GridShape) -> Result<WaveGrid> {
    if c.d != shape.d {
        return Err(Error::DimensionMismatch { expected: shape.d, found: c.d });
    }
    check_order(shape, c.order)?;
    let tab = table(shape, c.order);
    let order = c.order;
    let values = shape
        .map_nodes(|_| ())
        .iter()
        .enumerate()
        .map(|(idx, _)| {
            let m = shape.unflatten(idx);
            if c.d == 1 {
                (0..order).map(|j| c.coeffs[j] * tab[m[0]][j]).sum()
            } else {
                let (a, b) = (&tab[m[0]], &tab[m[1]]);
                let mut s = Complex64::new(0.0, 0.0);
                for j1 in 0..order {
                    for j2 in 0..order {
                        s += c.coeffs[j1 * order + j2] * (a[j1] * b[j2]);
                    }
                }
                s
            }
        })
        .collect();
    Ok(WaveGrid { d: shape.d, l: shape.l, n: shape.n, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape1() -> GridShape {
        GridShape::new(1, 12.0, 1024).unwrap()
    }

    #[test]
    fn ground_state_is_first_mode() {
        let c = hermite_analyze(&WaveGrid::ground_state(shape1()), 40).unwrap();
        assert!((c.coeffs[0].re - 1.0).abs() < 1e-10);
        assert!(c.coeffs[1..].iter().all(|z| z.norm() <= 1e-8));
    }

    #[test]
    fn position_times_ground_state() {
        // x φ0 = φ1 / sqrt(2)
        let s = shape1();
        let g = WaveGrid::ground_state(s);
        let xg = WaveGrid::from_fn(s, |x| {
            Complex64::new(x[0] * std::f64::consts::PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp(), 0.0)
        });
        assert!((xg.norm_sqr() - 0.5).abs() < 1e-10);
        let c = hermite_analyze(&xg, 20).unwrap();
        assert!((c.coeffs[1].re - 0.5f64.sqrt()).abs() < 1e-10);
        assert!(c.coeffs.iter().enumerate().all(|(j, z)| j == 1 || z.norm() < 1e-10));
        let _ = g;
    }

    #[test]
    fn parseval_and_roundtrip() {
        let s = shape1();
        let psi = WaveGrid::gaussian(s, &[0.7], 1.3, &[0.4]).unwrap();
        let c = hermite_analyze(&psi, 120).unwrap();
        assert!((c.norm_sqr() - 1.0).abs() < 1e-6);
        let back = hermite_synthesize(&c, s).unwrap();
        assert!(back.l2_distance(&psi).unwrap() < 1e-8);
    }

    #[test]
    fn resolution_guard() {
        let s = GridShape::new(1, 12.0, 64).unwrap();
        let psi = WaveGrid::ground_state(s);
        assert!(matches!(hermite_analyze(&psi, 17), Err(Error::Resolution { .. })));
    }

    #[test]
    fn oracle_phases() {
        let c = HermiteCoeffs::basis(1, 8, &[0]).unwrap();
        let r = hermite_rotation_oracle(&c, 0.7);
        assert!((r.coeffs[0] - Complex64::from_polar(1.0, -0.35)).norm() < 1e-15);
        let mut mixed = HermiteCoeffs::zero(1, 8);
        for j in 0..8 {
            mixed.coeffs[j] = Complex64::new(0.1 * j as f64, -0.05);
        }
        let full = hermite_rotation_oracle(&mixed, std::f64::consts::TAU);
        for (a, b) in full.coeffs.iter().zip(&mixed.coeffs) {
            assert!((a + b).norm() < 1e-12);
        }
        let same = hermite_rotation_oracle(&mixed, 0.0);
        assert_eq!(same.coeffs, mixed.coeffs);
    }

    #[test]
    fn two_dimensional_full_turn_is_identity() {
        let mut c = HermiteCoeffs::zero(2, 6);
        for (i, z) in c.coeffs.iter_mut().enumerate() {
            *z = Complex64::new((i as f64).sin(), (i as f64).cos()) * 0.1;
        }
        let r = hermite_rotation_oracle(&c, std::f64::consts::TAU);
        for (a, b) in r.coeffs.iter().zip(&c.coeffs) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
