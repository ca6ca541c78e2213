use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::algebra::{default_realization, heisenberg_action, omega, AlgebraElement};
use super::iwasawa::{iwasawa_angle, vector_angle};
use super::mat2::Mat2;
use super::quadrature::integrate_unit;
use crate::error::{check_dim, check_finite, Error, Result};

/// Element of `SL2 ⋉ H_d`: matrix part, Heisenberg exponential coordinates
/// `(x_1, y_1, ..., x_d, y_d)`, centre, and the number of completed turns of
/// the Iwasawa angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub d: usize,
    #[serde(rename = "S")]
    pub s: Mat2,
    pub v: Vec<f64>,
    pub z: f64,
    pub winding: i64,
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// Action of a group matrix on interleaved Heisenberg coordinates.
fn act_on_pairs(s: &Mat2, v: &[f64]) -> Vec<f64> {
    let act = s.swap_conj();
    v.chunks_exact(2).flat_map(|p| act.apply([p[0], p[1]])).collect()
}

/// Rotation angle of the polar factor of `g` (det > 0), in the
/// `vector_angle` convention.
fn polar_angle(g: &Mat2) -> f64 {
    let m = &g.0;
    (m[0][1] - m[1][0]).atan2(m[0][0] + m[1][1])
}

/// Signed angle between `g u` and `U u` where `U` is the polar rotation of
/// `g`; always inside `(-π/2, π/2)`.
fn polar_defect(g: &Mat2, u: [f64; 2]) -> f64 {
    wrap_pi(vector_angle(g.apply(u)) - vector_angle(u) - polar_angle(g))
}

/// Continuous change of the Iwasawa angle along `s -> exp(s m)`, `s ∈ [0, 1]`.
fn exp_angle_change(m: &Mat2) -> f64 {
    let det = m.det();
    let e2 = [0.0, 1.0];
    let end = m.expm_traceless(1.0);
    if det <= 0.0 {
        // hyperbolic or parabolic flows turn a vector by less than π
        return wrap_pi(vector_angle(end.apply(e2)));
    }
    // Elliptic: the flow is a uniform rotation after the change of variables
    // w = L v, L the square root of the conserved quadratic form.
    let [[al, be], [ga, _]] = m.0;
    let mut q = Mat2::new(-ga, al, al, be);
    if q.trace() < 0.0 {
        q = -q;
    }
    let sq = q.det().sqrt();
    let l = Mat2::new(q.0[0][0] + sq, q.0[0][1], q.0[1][0], q.0[1][1] + sq)
        .scale(1.0 / (q.trace() + 2.0 * sq).sqrt());
    let k = l * *m * l.inverse();
    let defect = |v: [f64; 2]| wrap_pi(vector_angle(v) - vector_angle(l.apply(v)));
    k.0[0][1] + defect(end.apply(e2)) - defect(e2)
}

fn winding_from_lift(lift: f64, s: &Mat2) -> i64 {
    ((lift - iwasawa_angle(s)) / TAU).round() as i64
}

impl GroupElement {
    pub fn identity(d: usize) -> Self {
        GroupElement {
            d,
            s: Mat2::IDENTITY,
            v: vec![0.0; 2 * d],
            z: 0.0,
            winding: 0,
        }
    }

    /// `(S, 0, 0)` with the winding inferred from the principal angle.
    pub fn from_matrix(d: usize, s: Mat2) -> Self {
        GroupElement { s, ..Self::identity(d) }
    }

    /// `(I, v, z)` from separate X and Y coordinate vectors.
    pub fn heisenberg(xi: &[f64], eta: &[f64], z: f64) -> Result<Self> {
        check_dim(xi.len(), eta.len())?;
        let d = xi.len();
        let v = xi.iter().zip(eta).flat_map(|(&x, &y)| [x, y]).collect();
        Ok(GroupElement { v, z, ..Self::identity(d) })
    }

    pub fn validate(&self) -> Result<()> {
        if self.v.len() != 2 * self.d {
            return Err(Error::InvalidArgument(format!(
                "v has length {} but d = {}",
                self.v.len(),
                self.d
            )));
        }
        check_finite(self.s.0.iter().flatten().copied().chain(self.v.iter().copied()).chain([self.z]), "group element")?;
        let det = self.s.det();
        if (det - 1.0).abs() > 1e-9 {
            return Err(Error::Determinant(det));
        }
        Ok(())
    }

    pub fn xi(&self) -> Vec<f64> {
        self.v.iter().step_by(2).copied().collect()
    }

    pub fn eta(&self) -> Vec<f64> {
        self.v.iter().skip(1).step_by(2).copied().collect()
    }

    /// Iwasawa angle lifted to the universal cover: `t1 + 2π winding`.
    pub fn lifted_angle(&self) -> f64 {
        iwasawa_angle(&self.s) + TAU * self.winding as f64
    }

    /// Drops the Heisenberg part.
    pub fn sl2_part(&self) -> GroupElement {
        GroupElement {
            s: self.s,
            winding: self.winding,
            ..Self::identity(self.d)
        }
    }
}

/// Exponential map.
pub fn exp(x: &AlgebraElement) -> Result<GroupElement> {
    x.validate()?;
    let m = x.sl2_matrix();
    let s = m.expm_traceless(1.0);
    let winding = winding_from_lift(exp_angle_change(&m), &s);

    let u = x.heisenberg_vector();
    if u.iter().all(|&c| c == 0.0) || x.has_zero_sl2() {
        // ω(s u, u) vanishes identically when the sl2 part is zero
        if x.has_zero_sl2() {
            return Ok(GroupElement { d: x.d, s, v: u, z: x.zeta, winding });
        }
        return Ok(GroupElement { d: x.d, s, v: vec![0.0; 2 * x.d], z: x.zeta, winding });
    }
    let act = heisenberg_action(x.a, x.b, x.c);
    let apply = |mat: Mat2, u: &[f64]| -> Vec<f64> {
        u.chunks_exact(2).flat_map(|p| mat.apply([p[0], p[1]])).collect()
    };
    let v = apply(act.phi_traceless(), &u);

    let rate = act.det().abs().sqrt();
    let pieces = if m.frobenius() <= 1.0 {
        1
    } else {
        (2.0 * rate).ceil().max(2.0) as usize
    };
    let area = integrate_unit(pieces, |t| {
        let vt = apply(act.scale(t).phi_traceless().scale(t), &u);
        let dvt = apply(act.expm_traceless(t), &u);
        omega(&vt, &dvt)
    });
    Ok(GroupElement { d: x.d, s, v, z: x.zeta + 0.5 * area, winding })
}

/// Group law `(S, v, z)(S', v', z') = (SS', v + S▷v', z + z' + ω(v, S▷v')/2)`.
pub fn multiply(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    check_dim(g.d, h.d)?;
    let s = g.s * h.s;
    let hv = act_on_pairs(&g.s, &h.v);
    let v: Vec<f64> = g.v.iter().zip(&hv).map(|(a, b)| a + b).collect();
    let z = g.z + h.z + 0.5 * omega(&g.v, &hv);

    let t1h = iwasawa_angle(&h.s);
    let (sn, cs) = t1h.sin_cos();
    let lift = g.lifted_angle() + h.lifted_angle() + polar_defect(&g.s, [sn, cs])
        - polar_defect(&g.s, [0.0, 1.0]);
    let winding = winding_from_lift(lift, &s);
    Ok(GroupElement { d: g.d, s, v, z, winding })
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    let s = g.s.inverse_unimodular();
    let v: Vec<f64> = act_on_pairs(&s, &g.v).into_iter().map(|x| -x).collect();
    let t1 = iwasawa_angle(&s);
    let (sn, cs) = t1.sin_cos();
    // chosen so that g * g^{-1} has lifted angle 0
    let lift = -g.lifted_angle() - polar_defect(&g.s, [sn, cs]) + polar_defect(&g.s, [0.0, 1.0]);
    let winding = winding_from_lift(lift, &s);
    GroupElement { d: g.d, s, v, z: -g.z, winding }
}

/// Adjoint action `d/dt|_{0} g exp(tX) g^{-1}` in closed form.
pub fn ad(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    check_dim(g.d, x.d)?;
    let real = default_realization();
    let m = g.s * x.sl2_matrix() * g.s.inverse_unimodular();
    let (a, b, c) = real.decompose(&m);
    let u = act_on_pairs(&g.s, &x.heisenberg_vector());
    let act = heisenberg_action(a, b, c);
    let w = &g.v;
    let rw: Vec<f64> = w.chunks_exact(2).flat_map(|p| act.apply([p[0], p[1]])).collect();
    let u2: Vec<f64> = u.iter().zip(&rw).map(|(p, q)| p - q).collect();
    let zeta = x.zeta + omega(w, &u) - 0.5 * omega(w, &rw);
    Ok(AlgebraElement {
        d: x.d,
        a,
        b,
        c,
        xi: u2.iter().step_by(2).copied().collect(),
        eta: u2.iter().skip(1).step_by(2).copied().collect(),
        zeta,
    })
}

/// `‖S_g - S_h‖_F + ‖v_g - v_h‖_2 + |z_g - z_h|`, winding ignored.
pub fn distance(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    check_dim(g.d, h.d)?;
    let dv = g.v.iter().zip(&h.v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok((g.s - h.s).frobenius() + dv + (g.z - h.z).abs())
}

/// `distance` plus `2π |winding_g - winding_h|`.
pub fn distance_strict(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    Ok(distance(g, h)? + TAU * (g.winding - h.winding).abs() as f64)
}

/// Product of a sequence of group elements, left to right.
pub fn product<'a>(d: usize, items: impl IntoIterator<Item = &'a GroupElement>) -> Result<GroupElement> {
    items
        .into_iter()
        .try_fold(GroupElement::identity(d), |acc, g| multiply(&acc, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::iwasawa::rotation;
    type E = AlgebraElement;

    fn close(g: &GroupElement, h: &GroupElement, tol: f64) -> bool {
        distance(g, h).unwrap() <= tol
    }

    #[test]
    fn exp_zero_is_identity() {
        assert_eq!(exp(&E::zero(2)).unwrap(), GroupElement::identity(2));
    }

    #[test]
    fn exp_rotation_generator() {
        for t in [0.3, 1.0, 2.5, 4.0] {
            let g = exp(&E::sl2(1, t, -t, 0.0)).unwrap();
            assert!((g.s - rotation(t)).frobenius() < 1e-14);
            assert_eq!(g.winding, 0);
            assert!(g.v.iter().all(|&x| x == 0.0) && g.z == 0.0);
        }
    }

    #[test]
    fn exp_pure_heisenberg() {
        let x = E { xi: vec![0.7], eta: vec![-1.3], ..E::zero(1) };
        let g = exp(&x).unwrap();
        assert_eq!(g.s, Mat2::IDENTITY);
        assert_eq!(g.v, vec![0.7, -1.3]);
        assert_eq!(g.z, 0.0);
    }

    #[test]
    fn heisenberg_product_has_half_area_centre() {
        let (x, y) = (0.8, -1.7);
        let g = multiply(&exp(&E::basis_x(1, 0).scale(x)).unwrap(), &exp(&E::basis_y(1, 0).scale(y)).unwrap()).unwrap();
        assert_eq!(g.v, vec![x, y]);
        assert!((g.z - x * y / 2.0).abs() < 1e-15);
    }

    #[test]
    fn product_integration_oracle_for_half_area() {
        // Integrate the left-invariant flow q' = q X for X then Y with many tiny
        // steps of the first-order group law, independent of exp's quadrature.
        let (x, y) = (0.6, 1.1);
        let steps = 20000;
        let mut g = GroupElement::identity(1);
        for gen in [E::basis_x(1, 0).scale(x), E::basis_y(1, 0).scale(y)] {
            let dt = 1.0 / steps as f64;
            let step = GroupElement { v: vec![gen.xi[0] * dt, gen.eta[0] * dt], ..GroupElement::identity(1) };
            for _ in 0..steps {
                g = multiply(&g, &step).unwrap();
            }
        }
        assert!((g.z - x * y / 2.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&GroupElement::identity(1)), GroupElement::identity(1));
        let x = E { a: 0.3, b: -0.8, c: 0.5, xi: vec![1.0, 0.2], eta: vec![-0.4, 0.9], zeta: 0.7, d: 2 };
        let g = exp(&x).unwrap();
        assert!(close(&inverse(&g), &exp(&x.scale(-1.0)).unwrap(), 1e-12));
        let id = multiply(&g, &inverse(&g)).unwrap();
        assert!(close(&id, &GroupElement::identity(2), 1e-12));
        assert_eq!(id.winding, 0);
    }

    #[test]
    fn matrix_then_translation() {
        let s = GroupElement::from_matrix(1, Mat2::new(2.0, 1.0, 1.0, 1.0));
        let t = GroupElement::heisenberg(&[0.5], &[-2.0], 0.0).unwrap();
        let g = multiply(&s, &t).unwrap();
        assert_eq!(g.s, s.s);
        assert_eq!(g.v, act_on_pairs(&s.s, &t.v));
        assert_eq!(g.z, 0.0);
    }

    #[test]
    fn full_turn_counts_one_winding() {
        let g = exp(&E::sl2(1, TAU, -TAU, 0.0)).unwrap();
        assert!((g.s - Mat2::IDENTITY).frobenius() < 1e-14);
        assert_eq!(g.winding, 1);
        let h = exp(&E::sl2(1, -TAU, TAU, 0.0)).unwrap();
        assert_eq!(h.winding, -1);
        let three = exp(&E::sl2(1, 3.0 * TAU + 0.5, -(3.0 * TAU + 0.5), 0.0)).unwrap();
        assert_eq!(three.winding, 3);
    }

    #[test]
    fn winding_accumulates_over_quarter_turns() {
        let q = exp(&E::sl2(1, PI / 2.0, -PI / 2.0, 0.0)).unwrap();
        let mut g = GroupElement::identity(1);
        for k in 1..=8 {
            g = multiply(&g, &q).unwrap();
            assert_eq!(g.winding, k / 4, "after {k} quarter turns");
        }
    }

    #[test]
    fn eccentric_elliptic_winding() {
        // a - 1e8 b turns once every 2π/1e4 time units
        let beta: f64 = 1e8;
        let t = 2.5 * TAU / beta.sqrt();
        let g = exp(&E::sl2(1, t, -t * beta, 0.0)).unwrap();
        assert_eq!(g.winding, 2);
    }

    #[test]
    fn ad_spec_examples() {
        let g = exp(&E::basis_b(1)).unwrap();
        let got = ad(&g, &E::basis_a(1)).unwrap();
        assert!(got.max_abs_diff(&E::sl2(1, 1.0, -1.0, 1.0)) < 1e-15);

        let g = exp(&E::basis_c(1).scale(2f64.ln())).unwrap();
        let got = ad(&g, &E::basis_a(1)).unwrap();
        assert!(got.max_abs_diff(&E::basis_a(1).scale(0.25)) < 1e-15);

        let x = E::sl2(2, 0.3, 1.0, -0.2);
        assert_eq!(ad(&GroupElement::identity(2), &x).unwrap(), x);
    }

    #[test]
    fn ad_matches_finite_difference_of_conjugation() {
        let g = exp(&E { a: 0.4, b: 0.3, c: -0.6, xi: vec![0.5], eta: vec![-1.2], zeta: 0.3, d: 1 }).unwrap();
        let x = E { a: -0.2, b: 0.7, c: 0.1, xi: vec![0.9], eta: vec![0.4], zeta: -0.5, d: 1 };
        let gi = inverse(&g);
        let h = 1e-6;
        let conj = |t: f64| multiply(&multiply(&g, &exp(&x.scale(t)).unwrap()).unwrap(), &gi).unwrap();
        let (p, m) = (conj(h), conj(-h));
        let expected = ad(&g, &x).unwrap();
        // sl2 part via matrix derivative, Heisenberg part via coordinates
        let ds = (p.s - m.s).scale(0.5 / h);
        let (a, b, c) = default_realization().decompose(&ds);
        assert!((a - expected.a).abs() < 1e-8 && (b - expected.b).abs() < 1e-8 && (c - expected.c).abs() < 1e-8);
        let dv: Vec<f64> = p.v.iter().zip(&m.v).map(|(x, y)| (x - y) * 0.5 / h).collect();
        assert!((dv[0] - expected.xi[0]).abs() < 1e-8);
        assert!((dv[1] - expected.eta[0]).abs() < 1e-8);
        assert!(((p.z - m.z) * 0.5 / h - expected.zeta).abs() < 1e-8);
    }

    #[test]
    fn distance_examples() {
        let g = exp(&E { a: 0.1, b: 0.2, c: 0.3, xi: vec![1.0], eta: vec![2.0], zeta: 3.0, d: 1 }).unwrap();
        assert_eq!(distance(&g, &g).unwrap(), 0.0);
        let w = -0.75;
        let h = exp(&E::basis_b(1).scale(w)).unwrap();
        assert!((distance(&GroupElement::identity(1), &h).unwrap() - w.abs()).abs() < 1e-15);
        assert_eq!(distance(&g, &h).unwrap(), distance(&h, &g).unwrap());
        let turn = exp(&E::sl2(1, TAU, -TAU, 0.0)).unwrap();
        let id = GroupElement::identity(1);
        assert!(distance(&turn, &id).unwrap() < 1e-14);
        assert!((distance_strict(&turn, &id).unwrap() - TAU).abs() < 1e-13);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let e = multiply(&GroupElement::identity(1), &GroupElement::identity(2));
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }
}
