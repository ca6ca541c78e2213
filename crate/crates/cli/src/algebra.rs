//! `check-algebra`: the bracket table plus closed-form and randomized Ad identities.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reachkit::lie::{ad, bracket, distance, exp, inverse, multiply, structure_table_residual, AlgebraElement, GroupElement};
use serde_json::json;

use crate::Report;

pub const DEFAULT_SEED: u64 = 20240229;
pub const TOLERANCE: f64 = 1e-9;
const RANDOM_TRIALS: usize = 32;

fn rel(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.max_abs_diff(b) / b.norm().max(1.0)
}

fn random_element(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> AlgebraElement {
    let coeffs: Vec<f64> = (0..3 + 2 * d + 1).map(|_| rng.gen_range(-scale..scale)).collect();
    AlgebraElement::from_coefficients(d, &coeffs).expect("length matches d")
}

fn random_group(rng: &mut ChaCha8Rng, d: usize) -> Result<GroupElement> {
    Ok(exp(&random_element(rng, d, 1.0))?)
}

pub fn check(d: usize, seed: u64) -> Result<Report> {
    if d == 0 {
        anyhow::bail!("--d must be at least 1");
    }
    let mut rows: Vec<(String, f64)> = structure_table_residual(d);

    // Closed forms on a small (v, τ) lattice.
    let lattice = [-2.0, -0.5, 0.25, 1.0, 1.5];
    let (mut by_b, mut by_c, mut by_x) = (0.0f64, 0.0f64, 0.0f64);
    for &v in &lattice {
        for &tau in &lattice {
            let ta = AlgebraElement::basis_a(d).scale(tau);
            let got = ad(&exp(&AlgebraElement::basis_b(d).scale(v))?, &ta)?;
            by_b = by_b.max(rel(&got, &AlgebraElement::sl2(d, tau, -v * v * tau, v * tau)));
            let got = ad(&exp(&AlgebraElement::basis_c(d).scale(v))?, &ta)?;
            by_c = by_c.max(rel(&got, &ta.scale((-2.0 * v).exp())));
            for i in 0..d {
                let got = ad(&exp(&AlgebraElement::basis_x(d, i).scale(v))?, &ta)?;
                // sign of the Y term as fixed by [a, X] = Y
                let mut want = ta.clone();
                want.eta[i] = -v * tau;
                want.zeta = -v * v * tau / 2.0;
                by_x = by_x.max(rel(&got, &want));
            }
        }
    }
    rows.push(("Ad(e^{vb}) τa = τa − v²τ b + vτ c".into(), by_b));
    rows.push(("Ad(e^{vc}) τa = e^{−2v} τa".into(), by_c));
    rows.push(("Ad(e^{vX_i}) τa = τa − vτ Y_i − (v²τ/2) Z".into(), by_x));

    // Randomized identities.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut jacobi, mut morphism, mut conj, mut inv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..RANDOM_TRIALS {
        let (x, y, z) = (random_element(&mut rng, d, 2.0), random_element(&mut rng, d, 2.0), random_element(&mut rng, d, 2.0));
        let cyc = bracket(&x, &bracket(&y, &z)?)?
            .add(&bracket(&y, &bracket(&z, &x)?)?)?
            .add(&bracket(&z, &bracket(&x, &y)?)?)?;
        jacobi = jacobi.max(cyc.norm());

        let (g, h) = (random_group(&mut rng, d)?, random_group(&mut rng, d)?);
        let lhs = ad(&multiply(&g, &h)?, &x)?;
        let rhs = ad(&g, &ad(&h, &x)?)?;
        morphism = morphism.max(rel(&lhs, &rhs));

        let small = x.scale(0.25);
        let via_ad = exp(&ad(&g, &small)?)?;
        let via_conj = multiply(&multiply(&g, &exp(&small)?)?, &inverse(&g))?;
        conj = conj.max(distance(&via_ad, &via_conj)?);

        inv = inv.max(distance(&multiply(&g, &inverse(&g))?, &GroupElement::identity(d))?);
    }
    rows.push(("Jacobi identity".into(), jacobi));
    rows.push(("Ad(gh) = Ad(g) Ad(h)".into(), morphism));
    rows.push(("exp(Ad(g) X) = g exp(X) g⁻¹".into(), conj));
    rows.push(("g g⁻¹ = e".into(), inv));

    let max_residual = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r.1 <= TOLERANCE);
    let residuals: Vec<_> = rows.iter().map(|(name, r)| json!({ "identity": name, "residual": r })).collect();
    Ok(Report {
        json: json!({
            "d": d,
            "seed": seed,
            "trials": RANDOM_TRIALS,
            "tolerance": TOLERANCE,
            "residuals": residuals,
            "max_residual": max_residual,
            "passed": passed,
        }),
        csv: None,
        passed,
    })
}
