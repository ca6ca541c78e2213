use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::mat2::Mat2;
use crate::error::{check_dim, check_finite, Error, Result};

/// 2x2 matrices realizing the basis `{a, b, c}` of sl2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisRealization {
    pub a: Mat2,
    pub b: Mat2,
    pub c: Mat2,
}

impl BasisRealization {
    /// Validates `[b,a] = c`, `[a,c] = 2a`, `[b,c] = -2b` and tracelessness.
    pub fn new(a: Mat2, b: Mat2, c: Mat2) -> Result<Self> {
        let r = BasisRealization { a, b, c };
        let residual = r.table_residual();
        if residual > 1e-12 || !residual.is_finite() {
            return Err(Error::Realization(residual));
        }
        // decomposition must be well posed
        if r.entry_determinant().abs() < 1e-12 {
            return Err(Error::Realization(f64::INFINITY));
        }
        Ok(r)
    }

    pub fn table_residual(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        [
            (b.commutator(&a) - c).frobenius(),
            (a.commutator(&c) - a.scale(2.0)).frobenius(),
            (b.commutator(&c) + b.scale(2.0)).frobenius(),
            a.trace().abs(),
            b.trace().abs(),
            c.trace().abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn to_matrix(&self, ca: f64, cb: f64, cc: f64) -> Mat2 {
        self.a.scale(ca) + self.b.scale(cb) + self.c.scale(cc)
    }

    fn entry_determinant(&self) -> f64 {
        let col = |m: &Mat2| [m.0[0][0], m.0[0][1], m.0[1][0]];
        det3([col(&self.a), col(&self.b), col(&self.c)])
    }

    /// Coefficients of a traceless matrix on `{a, b, c}` (Cramer's rule on
    /// the three free entries).
    pub fn decompose(&self, m: &Mat2) -> (f64, f64, f64) {
        let col = |m: &Mat2| [m.0[0][0], m.0[0][1], m.0[1][0]];
        let (ka, kb, kc, km) = (col(&self.a), col(&self.b), col(&self.c), col(m));
        let d = det3([ka, kb, kc]);
        (det3([km, kb, kc]) / d, det3([ka, km, kc]) / d, det3([ka, kb, km]) / d)
    }
}

// columns given as arrays
fn det3(cols: [[f64; 3]; 3]) -> f64 {
    let [u, v, w] = cols;
    u[0] * (v[1] * w[2] - v[2] * w[1]) - v[0] * (u[1] * w[2] - u[2] * w[1])
        + w[0] * (u[1] * v[2] - u[2] * v[1])
}

/// The default realization `A = [[0,1],[0,0]]`, `B = [[0,0],[1,0]]`,
/// `C = [[-1,0],[0,1]]`, validated on first use.
pub fn default_realization() -> &'static BasisRealization {
    static REALIZATION: OnceLock<BasisRealization> = OnceLock::new();
    REALIZATION.get_or_init(|| {
        BasisRealization::new(
            Mat2::new(0.0, 1.0, 0.0, 0.0),
            Mat2::new(0.0, 0.0, 1.0, 0.0),
            Mat2::new(-1.0, 0.0, 0.0, 1.0),
        )
        .expect("default basis realization must satisfy the sl2 bracket table")
    })
}

/// Matrix by which `ca a + cb b + cc c` acts on each `(x_i, y_i)` pair of
/// the Heisenberg algebra: `a: X -> Y`, `b: Y -> X`, `c: X -> X, Y -> -Y`.
pub fn heisenberg_action(ca: f64, cb: f64, cc: f64) -> Mat2 {
    Mat2::new(cc, cb, ca, -cc)
}

/// Element of `sl2 ⋉ h_d` in the basis `{a, b, c, X_1..X_d, Y_1..Y_d, Z}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub zeta: f64,
}

impl AlgebraElement {
    pub fn zero(d: usize) -> Self {
        AlgebraElement {
            d,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            xi: vec![0.0; d],
            eta: vec![0.0; d],
            zeta: 0.0,
        }
    }

    pub fn sl2(d: usize, a: f64, b: f64, c: f64) -> Self {
        AlgebraElement { a, b, c, ..Self::zero(d) }
    }

    pub fn basis_a(d: usize) -> Self {
        Self::sl2(d, 1.0, 0.0, 0.0)
    }

    pub fn basis_b(d: usize) -> Self {
        Self::sl2(d, 0.0, 1.0, 0.0)
    }

    pub fn basis_c(d: usize) -> Self {
        Self::sl2(d, 0.0, 0.0, 1.0)
    }

    /// `X_i`, zero-based index.
    pub fn basis_x(d: usize, i: usize) -> Self {
        let mut e = Self::zero(d);
        e.xi[i] = 1.0;
        e
    }

    /// `Y_i`, zero-based index.
    pub fn basis_y(d: usize, i: usize) -> Self {
        let mut e = Self::zero(d);
        e.eta[i] = 1.0;
        e
    }

    pub fn basis_z(d: usize) -> Self {
        AlgebraElement { zeta: 1.0, ..Self::zero(d) }
    }

    /// All `3 + 2d + 1` basis elements in the order a, b, c, X.., Y.., Z.
    pub fn basis(d: usize) -> Vec<AlgebraElement> {
        let mut out = vec![Self::basis_a(d), Self::basis_b(d), Self::basis_c(d)];
        out.extend((0..d).map(|i| Self::basis_x(d, i)));
        out.extend((0..d).map(|i| Self::basis_y(d, i)));
        out.push(Self::basis_z(d));
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.xi.len() != self.d || self.eta.len() != self.d {
            return Err(Error::InvalidArgument(format!(
                "xi/eta lengths {}/{} do not match d = {}",
                self.xi.len(),
                self.eta.len(),
                self.d
            )));
        }
        check_finite(self.coefficients(), "algebra element")
    }

    /// Flat coefficient vector in basis order.
    pub fn coefficients(&self) -> Vec<f64> {
        let mut v = vec![self.a, self.b, self.c];
        v.extend_from_slice(&self.xi);
        v.extend_from_slice(&self.eta);
        v.push(self.zeta);
        v
    }

    pub fn from_coefficients(d: usize, v: &[f64]) -> Result<Self> {
        if v.len() != 2 * d + 4 {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for d = {d}, got {}",
                2 * d + 4,
                v.len()
            )));
        }
        Ok(AlgebraElement {
            d,
            a: v[0],
            b: v[1],
            c: v[2],
            xi: v[3..3 + d].to_vec(),
            eta: v[3 + d..3 + 2 * d].to_vec(),
            zeta: v[3 + 2 * d],
        })
    }

    pub fn has_zero_sl2(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0
    }

    pub fn sl2_matrix(&self) -> Mat2 {
        default_realization().to_matrix(self.a, self.b, self.c)
    }

    pub fn heisenberg_action(&self) -> Mat2 {
        heisenberg_action(self.a, self.b, self.c)
    }

    /// Heisenberg vector interleaved as `(x_1, y_1, ..., x_d, y_d)`.
    pub fn heisenberg_vector(&self) -> Vec<f64> {
        self.xi.iter().zip(&self.eta).flat_map(|(&x, &y)| [x, y]).collect()
    }

    pub fn scale(&self, k: f64) -> Self {
        AlgebraElement {
            d: self.d,
            a: k * self.a,
            b: k * self.b,
            c: k * self.c,
            xi: self.xi.iter().map(|x| k * x).collect(),
            eta: self.eta.iter().map(|x| k * x).collect(),
            zeta: k * self.zeta,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.d, other.d)?;
        Ok(AlgebraElement {
            d: self.d,
            a: self.a + other.a,
            b: self.b + other.b,
            c: self.c + other.c,
            xi: self.xi.iter().zip(&other.xi).map(|(x, y)| x + y).collect(),
            eta: self.eta.iter().zip(&other.eta).map(|(x, y)| x + y).collect(),
            zeta: self.zeta + other.zeta,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coefficients().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coefficients()
            .iter()
            .zip(other.coefficients())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Symplectic pairing `sum_i x_i y'_i - y_i x'_i` on interleaved vectors.
pub fn omega(v: &[f64], w: &[f64]) -> f64 {
    v.chunks_exact(2)
        .zip(w.chunks_exact(2))
        .map(|(p, q)| p[0] * q[1] - p[1] * q[0])
        .sum()
}

/// Lie bracket of `sl2 ⋉ h_d`:
/// `[(m, u), (n, w)] = ([m, n], [u, w] + rho(m) w - rho(n) u)`.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_dim(x.d, y.d)?;
    let real = default_realization();
    let comm = x.sl2_matrix().commutator(&y.sl2_matrix());
    let (a, b, c) = real.decompose(&comm);

    let (rx, ry) = (x.heisenberg_action(), y.heisenberg_action());
    let mut xi = Vec::with_capacity(x.d);
    let mut eta = Vec::with_capacity(x.d);
    let mut zeta = 0.0;
    for i in 0..x.d {
        let u = [x.xi[i], x.eta[i]];
        let w = [y.xi[i], y.eta[i]];
        let ru = rx.apply(w);
        let rw = ry.apply(u);
        xi.push(ru[0] - rw[0]);
        eta.push(ru[1] - rw[1]);
        zeta += u[0] * w[1] - u[1] * w[0];
    }
    Ok(AlgebraElement { d: x.d, a, b, c, xi, eta, zeta })
}

/// Action of a traceless matrix (in the default realization) on an element
/// of `h_d` by derivations. The centre is sent to zero.
pub fn rho_apply(m: &Mat2, h: &AlgebraElement) -> Result<AlgebraElement> {
    if !h.has_zero_sl2() {
        return Err(Error::InvalidArgument(
            "rho_apply expects an element with zero sl2 part".into(),
        ));
    }
    if m.trace().abs() > 1e-12 {
        return Err(Error::InvalidArgument("rho_apply expects a traceless matrix".into()));
    }
    let (ca, cb, cc) = default_realization().decompose(m);
    let act = heisenberg_action(ca, cb, cc);
    let mut out = AlgebraElement::zero(h.d);
    for i in 0..h.d {
        let [x, y] = act.apply([h.xi[i], h.eta[i]]);
        out.xi[i] = x;
        out.eta[i] = y;
    }
    Ok(out)
}

/// Largest residual of the structure-constant table over all basis pairs.
pub fn structure_table_residual(d: usize) -> Vec<(String, f64)> {
    type E = AlgebraElement;
    let mut rows = Vec::new();
    let mut check = |name: String, x: E, y: E, expect: E| {
        let got = bracket(&x, &y).expect("same d");
        rows.push((name, got.max_abs_diff(&expect)));
    };
    let (a, b, c, z) = (E::basis_a(d), E::basis_b(d), E::basis_c(d), E::basis_z(d));
    let zero = E::zero(d);
    check("[b,a]=c".into(), b.clone(), a.clone(), c.clone());
    check("[a,c]=2a".into(), a.clone(), c.clone(), a.scale(2.0));
    check("[b,c]=-2b".into(), b.clone(), c.clone(), b.scale(-2.0));
    for s in [&a, &b, &c] {
        let name = if *s == a { "a" } else if *s == b { "b" } else { "c" };
        check(format!("[{name},Z]=0"), s.clone(), z.clone(), zero.clone());
    }
    for i in 0..d {
        let (x, y) = (E::basis_x(d, i), E::basis_y(d, i));
        let k = i + 1;
        check(format!("[X{k},Y{k}]=Z"), x.clone(), y.clone(), z.clone());
        check(format!("[X{k},Z]=0"), x.clone(), z.clone(), zero.clone());
        check(format!("[Y{k},Z]=0"), y.clone(), z.clone(), zero.clone());
        check(format!("[a,X{k}]=Y{k}"), a.clone(), x.clone(), y.clone());
        check(format!("[b,X{k}]=0"), b.clone(), x.clone(), zero.clone());
        check(format!("[c,X{k}]=X{k}"), c.clone(), x.clone(), x.clone());
        check(format!("[a,Y{k}]=0"), a.clone(), y.clone(), zero.clone());
        check(format!("[b,Y{k}]=X{k}"), b.clone(), y.clone(), x.clone());
        check(format!("[c,Y{k}]=-Y{k}"), c.clone(), y.clone(), y.scale(-1.0));
        for j in 0..d {
            if j != i {
                check(
                    format!("[X{k},Y{}]=0", j + 1),
                    x.clone(),
                    E::basis_y(d, j),
                    zero.clone(),
                );
            }
        }
    }
    rows
}
