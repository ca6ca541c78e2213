use serde::{Deserialize, Serialize};

use super::map::AffineSymplecticMap;
use crate::error::{Error, Result};

/// Phase-plane density samples at cell centres of `[q_min, q_max] × [p_min, p_max]`
/// (d = 1), row-major with `q` varying slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub d: usize,
    /// `[[q_min, q_max], [p_min, p_max]]`.
    pub bounds: [[f64; 2]; 2],
    #[serde(rename = "N")]
    pub n: [usize; 2],
    /// Exponent of the Lᵖ distance.
    pub p: f64,
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl PhaseGrid {
    pub fn new(bounds: [[f64; 2]; 2], n: [usize; 2], p: f64) -> Result<Self> {
        let g = Self { d: 1, bounds, n, p, values: vec![0.0; n[0] * n[1]] };
        g.validate_shape()?;
        Ok(g)
    }

    /// `[-8, 8]²` with 512 cells per axis.
    pub fn desk(p: f64) -> Self {
        Self::new([[-8.0, 8.0], [-8.0, 8.0]], [512, 512], p).expect("valid desk grid")
    }

    fn validate_shape(&self) -> Result<()> {
        if self.d != 1 {
            return Err(Error::InvalidArgument("phase grids are two-dimensional (d = 1)".into()));
        }
        for ax in 0..2 {
            let [lo, hi] = self.bounds[ax];
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() || self.n[ax] < 2 {
                return Err(Error::InvalidArgument(format!("bad axis {ax}: [{lo}, {hi}] with {} cells", self.n[ax])));
            }
        }
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidArgument(format!("Lp exponent must be in [1, ∞), got {}", self.p)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if self.values.len() != self.n[0] * self.n[1] {
            return Err(Error::GridMismatch("sample count does not match N".into()));
        }
        if self.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument("densities must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn spacing(&self) -> [f64; 2] {
        [0, 1].map(|ax| (self.bounds[ax][1] - self.bounds[ax][0]) / self.n[ax] as f64)
    }

    pub fn cell(&self) -> f64 {
        let h = self.spacing();
        h[0] * h[1]
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let h = self.spacing();
        [self.bounds[0][0] + (i as f64 + 0.5) * h[0], self.bounds[1][0] + (j as f64 + 0.5) * h[1]]
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell()
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.bounds != other.bounds || self.n != other.n || self.p != other.p {
            return Err(Error::GridMismatch("grids differ in bounds, N or p".into()));
        }
        Ok(())
    }

    /// Samples `f` at the cell centres, replacing the values.
    pub fn fill(&mut self, mut f: impl FnMut([f64; 2]) -> f64) {
        let n1 = self.n[1];
        for i in 0..self.n[0] {
            for j in 0..n1 {
                self.values[i * n1 + j] = f(self.node(i, j));
            }
        }
    }

    /// Bilinear interpolation between cell centres; zero outside the grid.
    pub fn interpolate(&self, z: [f64; 2]) -> f64 {
        let h = self.spacing();
        let fi = (z[0] - self.bounds[0][0]) / h[0] - 0.5;
        let fj = (z[1] - self.bounds[1][0]) / h[1] - 0.5;
        if !(fi >= 0.0 && fj >= 0.0) {
            return 0.0;
        }
        let (i, j) = (fi.floor() as usize, fj.floor() as usize);
        if i + 1 >= self.n[0] || j + 1 >= self.n[1] {
            return 0.0;
        }
        let (a, b) = (fi - i as f64, fj - j as f64);
        let v = |i: usize, j: usize| self.values[i * self.n[1] + j];
        (1.0 - a) * ((1.0 - b) * v(i, j) + b * v(i, j + 1)) + a * ((1.0 - b) * v(i + 1, j) + b * v(i + 1, j + 1))
    }

    fn contains(&self, z: [f64; 2]) -> bool {
        (0..2).all(|ax| z[ax] >= self.bounds[ax][0] && z[ax] <= self.bounds[ax][1])
    }
}

/// Initial densities on the `(q, p)` plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DensitySource {
    /// Normalized Gaussian with independent axes.
    Gaussian { mean: [f64; 2], std: [f64; 2] },
    /// `exp(−(|z − c| − R)²/(2w²))`, normalized.
    Ring { center: [f64; 2], radius: f64, width: f64 },
    /// Sampled density, bilinearly interpolated (first-order accurate).
    Grid(PhaseGrid),
}

impl DensitySource {
    pub fn standard_gaussian() -> Self {
        DensitySource::Gaussian { mean: [0.0, 0.0], std: [1.0, 1.0] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DensitySource::Gaussian { std, .. } if std.iter().all(|s| *s > 0.0 && s.is_finite()) => Ok(()),
            DensitySource::Ring { radius, width, .. } if *radius >= 0.0 && *width > 0.0 => Ok(()),
            DensitySource::Grid(g) => g.validate(),
            _ => Err(Error::InvalidArgument(format!("invalid density source {self:?}"))),
        }
    }

    fn ring_norm(radius: f64, width: f64) -> f64 {
        // ∫_0^∞ 2π r exp(-(r-R)²/2w²) dr by the trapezoid rule on a fine mesh
        let hi = radius + 40.0 * width;
        let n = 20000;
        let h = hi / n as f64;
        let f = |r: f64| 2.0 * std::f64::consts::PI * r * (-(r - radius).powi(2) / (2.0 * width * width)).exp();
        h * ((1..n).map(|k| f(k as f64 * h)).sum::<f64>() + 0.5 * f(hi))
    }

    /// Density at `z`, together with whether `z` lies where the source is
    /// defined (grid sources only cover their own box).
    pub fn evaluator(&self) -> impl Fn([f64; 2]) -> (f64, bool) + '_ {
        let ring_norm = match self {
            DensitySource::Ring { radius, width, .. } => Self::ring_norm(*radius, *width),
            _ => 1.0,
        };
        move |z| match self {
            DensitySource::Gaussian { mean, std } => {
                let a = (z[0] - mean[0]) / std[0];
                let b = (z[1] - mean[1]) / std[1];
                let v = (-(a * a + b * b) / 2.0).exp() / (2.0 * std::f64::consts::PI * std[0] * std[1]);
                (v, true)
            }
            DensitySource::Ring { center, radius, width } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                ((-(r - radius).powi(2) / (2.0 * width * width)).exp() / ring_norm, true)
            }
            DensitySource::Grid(g) => (g.interpolate(z), g.contains(z)),
        }
    }

    /// Total mass (1 for the analytic sources).
    pub fn mass(&self) -> f64 {
        match self {
            DensitySource::Grid(g) => g.mass(),
            _ => 1.0,
        }
    }

    pub fn sample(&self, grid: &PhaseGrid) -> Result<PhaseGrid> {
        pullback(self, &AffineSymplecticMap::identity(1), grid)
    }
}

/// Relative mass that may go missing before [`pullback`] reports an escape.
pub const ESCAPE_TOL: f64 = 1e-6;

/// `ρ0 ∘ Φ` sampled on `grid`. Fails if more than [`ESCAPE_TOL`] of the
/// source mass is missing from the result: either the output grid does not
/// cover the transported density, or mapped nodes fall outside a sampled
/// source.
pub fn pullback(rho0: &DensitySource, map: &AffineSymplecticMap, grid: &PhaseGrid) -> Result<PhaseGrid> {
    pullback_with(rho0, map, grid, ESCAPE_TOL)
}

pub fn pullback_with(rho0: &DensitySource, map: &AffineSymplecticMap, grid: &PhaseGrid, escape_tol: f64) -> Result<PhaseGrid> {
    rho0.validate()?;
    if map.d != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: map.d });
    }
    let mut out = grid.clone();
    out.values = vec![0.0; grid.n[0] * grid.n[1]];
    out.validate()?;
    let eval = rho0.evaluator();
    out.fill(|z| eval([map.m[0] * z[0] + map.m[1] * z[1] + map.b[0], map.m[2] * z[0] + map.m[3] * z[1] + map.b[1]]).0);
    let lost = (1.0 - out.mass() / rho0.mass()).abs();
    if lost > escape_tol {
        return Err(Error::SupportEscape(lost));
    }
    Ok(out)
}

/// Riemann-sum `‖g1 − g2‖_p` with the grids' common exponent.
pub fn lp_distance(g1: &PhaseGrid, g2: &PhaseGrid) -> Result<f64> {
    g1.same_grid(g2)?;
    lp_norm_of(g1.values.iter().zip(&g2.values).map(|(a, b)| a - b), g1.p, g1.cell())
}

/// Same as [`lp_distance`] with an explicit exponent.
pub fn lp_distance_with(g1: &PhaseGrid, g2: &PhaseGrid, p: f64) -> Result<f64> {
    if g1.bounds != g2.bounds || g1.n != g2.n {
        return Err(Error::GridMismatch("grids differ in bounds or N".into()));
    }
    lp_norm_of(g1.values.iter().zip(&g2.values).map(|(a, b)| a - b), p, g1.cell())
}

fn lp_norm_of(diff: impl Iterator<Item = f64>, p: f64, cell: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("Lp exponent must be in [1, ∞), got {p}")));
    }
    let s: f64 = diff.map(|x| x.abs().powf(p)).sum();
    Ok((s * cell).powf(1.0 / p))
}
