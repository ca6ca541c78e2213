//! One line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reachkit::lie::*;
use reachkit::liouville::{self, lambda, schedule_map, segment_map, segment_map_physical, AffineSymplecticMap, DensitySource, LiouvilleTargetParams, PhaseGrid};
use reachkit::quantum::{self, GridShape, HermiteCoeffs, QuantumReachOptions, QuantumTargetParams, WaveGrid};
use reachkit::schedule::{ControlSchedule, ControlSegment};
use reachkit::sim::{loglog_slope, simulate, sweep};
use reachkit::synth::{recipe_c, recipe_rotation, recipe_scaled_drift, synthesize};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let out = f();
    let took = t0.elapsed();
    let pass = out.pass && took < limit;
    println!(
        "criterion {id} [{}] {title}: {} ({:.2}s of {}s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn rel(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.max_abs_diff(b) / b.norm().max(1e-300)
}

fn structure_constants() -> Outcome {
    let worst = (1..=3)
        .flat_map(structure_table_residual)
        .map(|(_, r)| r)
        .fold(0.0, f64::max);
    Outcome { pass: worst <= 1e-12, detail: format!("max residual {worst:.1e} over d = 1..3") }
}

fn ad_closed_forms() -> Outcome {
    let grid = [-2.0, -1.0, -0.1, 0.1, 1.0, 2.0];
    let d = 1;
    let (mut e_b, mut e_c, mut e_x, mut e_x_table) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &v in &grid {
        for &tau in &grid {
            let ta = AlgebraElement::basis_a(d).scale(tau);
            let by_b = ad(&exp(&AlgebraElement::basis_b(d).scale(v)).unwrap(), &ta).unwrap();
            e_b = e_b.max(rel(&by_b, &AlgebraElement::sl2(d, tau, -v * v * tau, v * tau)));
            let by_c = ad(&exp(&AlgebraElement::basis_c(d).scale(v)).unwrap(), &AlgebraElement::basis_a(d)).unwrap();
            e_c = e_c.max(rel(&by_c, &AlgebraElement::basis_a(d).scale((-2.0 * v).exp())));
            // the displayed Heisenberg form, sign of the Y term as written
            let by_x = ad(&exp(&AlgebraElement::basis_x(d, 0).scale(v)).unwrap(), &ta).unwrap();
            let mut stated = AlgebraElement::basis_a(d).scale(tau);
            stated.eta[0] = v * tau;
            stated.zeta = -v * v * tau / 2.0;
            e_x = e_x.max(rel(&by_x, &stated));
            stated.eta[0] = -v * tau;
            e_x_table = e_x_table.max(rel(&by_x, &stated));
        }
    }
    let pass = e_b <= 1e-9 && e_c <= 1e-9 && e_x <= 1e-9;
    Outcome {
        pass,
        detail: format!(
            "Ad(e^vb)τa {e_b:.1e}, Ad(e^vc)a {e_c:.1e}, Ad(e^vX)τa vs τa+vτY−(v²τ/2)Z {e_x:.1e}; \
             with the sign implied by [a,X]=Y (−vτY) {e_x_table:.1e}"
        ),
    }
}

fn iwasawa_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let basis = [AlgebraElement::basis_a(1), AlgebraElement::basis_b(1), AlgebraElement::basis_c(1)];
    let (mut worst, mut unique_worst, mut in_range) = (0.0f64, 0.0f64, true);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=6);
        let mut g = GroupElement::identity(1);
        for _ in 0..k {
            let x = basis[rng.gen_range(0..3)].scale(rng.gen_range(-2.0..2.0));
            g = multiply(&g, &exp(&x).unwrap()).unwrap();
        }
        let f = iwasawa(&g.s).unwrap();
        in_range &= (0.0..TAU).contains(&f.t1);
        let back = f.recompose();
        worst = worst.max((back - g.s).frobenius() / g.s.frobenius());
        let again = iwasawa(&back).unwrap();
        let dt1 = (again.t1 - f.t1).abs().min(TAU - (again.t1 - f.t1).abs());
        unique_worst = unique_worst.max(dt1.max((again.t2 - f.t2).abs()).max((again.t3 - f.t3).abs()));
    }
    Outcome {
        pass: worst <= 1e-9 && unique_worst <= 1e-9 && in_range,
        detail: format!("recompose {worst:.1e}, re-decomposition drift {unique_worst:.1e}, t1 in [0,2π): {in_range}"),
    }
}

fn synthesis_convergence() -> Outcome {
    let eps = [1e-1, 1e-2, 1e-3, 1e-4];
    let d = 1;
    let generic = [
        exp(&AlgebraElement::sl2(d, PI / 4.0, -PI / 4.0, 0.0)).unwrap(),
        exp(&AlgebraElement::basis_c(d).scale(0.5)).unwrap(),
        exp(&AlgebraElement::basis_b(d).scale(0.3)).unwrap(),
        GroupElement::heisenberg(&[0.7], &[-0.4], 0.3).unwrap(),
    ];
    let generic = product(d, &generic).unwrap();
    let c = exp(&AlgebraElement::basis_c(d)).unwrap();
    let a2 = exp(&AlgebraElement::basis_a(d).scale(2.0)).unwrap();
    let rot = exp(&AlgebraElement::sl2(d, FRAC_PI_2, -FRAC_PI_2, 0.0)).unwrap();
    type Recipe<'a> = Box<dyn Fn(f64) -> reachkit::Result<ControlSchedule> + Sync + 'a>;
    let cases: Vec<(&str, &GroupElement, Recipe)> = vec![
        ("exp(c)", &c, Box::new(|e| recipe_c(d, 1.0, e, e * e))),
        ("exp(2a)", &a2, Box::new(|e| recipe_scaled_drift(d, 2.0, e))),
        ("exp(π/2(a−b))", &rot, Box::new(|e| recipe_rotation(d, FRAC_PI_2, e))),
        ("generic", &generic, Box::new(|e| synthesize(&generic, e))),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, target, recipe) in cases {
        let rows: Vec<_> = sweep(target, recipe, &eps, 4).unwrap().into_iter().map(|r| r.unwrap()).collect();
        let slope = loglog_slope(&rows);
        let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
        let last = rows.last().unwrap();
        let ok = decreasing && slope >= 0.9 && last.error <= 1e-2 && last.total_time <= 1e-2;
        pass &= ok;
        parts.push(format!("{name}: slope {slope:.3}, final {:.1e}, T {:.1e}", last.error, last.total_time));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn metaplectic_sign() -> Outcome {
    // oracle on random coefficients
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random = |d: usize, m: usize| {
        let mut c = HermiteCoeffs::zero(d, m);
        c.coeffs.iter_mut().for_each(|z| *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = c.norm_sqr().sqrt();
        c.coeffs.iter_mut().for_each(|z| *z /= n);
        c
    };
    let ip = |a: &HermiteCoeffs, b: &HermiteCoeffs| -> Complex64 { a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.conj() * y).sum() };
    let c1 = random(1, 32);
    let c2 = random(2, 12);
    let s1 = ip(&c1, &quantum::hermite_rotation_oracle(&c1, TAU));
    let s2 = ip(&c2, &quantum::hermite_rotation_oracle(&c2, TAU));
    let oracle_dev = (s1 + 1.0).norm().max((s2 - 1.0).norm());

    // split-step against the oracle on a displaced Gaussian
    let shape = GridShape::new(1, 12.0, 1024).unwrap();
    let psi = WaveGrid::gaussian(shape, &[1.0], 1.0, &[0.5]).unwrap();
    let coeffs = quantum::hermite_analyze(&psi, 200).unwrap();
    let mut split_worst = 0.0f64;
    for t in [FRAC_PI_2, PI, TAU] {
        let want = quantum::hermite_synthesize(&quantum::hermite_rotation_oracle(&coeffs, t), shape).unwrap();
        let sched = ControlSchedule::single(1, ControlSegment::new(t, -1.0, vec![0.0], 0.0));
        let got = quantum::propagate(&psi, &sched, 1e-3).unwrap();
        split_worst = split_worst.max(got.l2_distance(&want).unwrap());
    }
    let Ok(full) = quantum::propagate(&psi, &ControlSchedule::single(1, ControlSegment::new(TAU, -1.0, vec![0.0], 0.0)), 1e-3) else {
        return Outcome { pass: false, detail: "propagation failed".into() };
    };
    let sign1 = psi.inner(&full).unwrap();

    // even dimension on the grid: a full turn is +ψ
    let shape2 = GridShape::new(2, 8.0, 256).unwrap();
    let psi2 = WaveGrid::gaussian(shape2, &[0.8, -0.5], 1.0, &[0.3, 0.2]).unwrap();
    let full2 = quantum::propagate(&psi2, &ControlSchedule::single(2, ControlSegment::new(TAU, -1.0, vec![0.0, 0.0], 0.0)), 1e-3).unwrap();
    let sign2 = psi2.inner(&full2).unwrap();

    let pass = oracle_dev <= 1e-8 && split_worst <= 1e-6 && (sign1 + 1.0).norm() <= 1e-6 && (sign2 - 1.0).norm() <= 1e-6;
    Outcome {
        pass,
        detail: format!(
            "oracle ⟨c,U(2π)c⟩ d=1 {:.6}, d=2 {:.6} (dev {oracle_dev:.1e}); split-step vs oracle {split_worst:.1e}; \
             grid ⟨ψ,U(2π)ψ⟩ d=1 {:.6}, d=2 {:.6}",
            s1.re, s2.re, sign1.re, sign2.re
        ),
    }
}

fn quantum_desk_check() -> Outcome {
    let shape = GridShape::new(1, 8.0, 32768).unwrap();
    let psi0 = WaveGrid::ground_state(shape);
    let params = QuantumTargetParams { s: 0.1, alpha: 0.3, p: vec![0.5], sigma: 2.0, beta: vec![1.0] };
    match quantum::reach_experiment(&psi0, &params, 1e-2, QuantumReachOptions::default()) {
        Ok(r) => Outcome {
            pass: r.passed && r.error <= 1e-2 && r.total_time <= 0.1,
            detail: format!(
                "error {:.2e}, total time {:.3}, eps {:.2e}, group error {:.2e}, N = 32768, L = 8{}",
                r.error,
                r.total_time,
                r.epsilon,
                r.group_error,
                r.failure.map(|f| format!(", stopped: {f}")).unwrap_or_default()
            ),
        },
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
    }
}

fn liouville_periodicity() -> Outcome {
    let quarter = ControlSegment::new(FRAC_PI_2, 1.0, vec![0.0], 0.0);
    let q = segment_map_physical(&quarter, 1).unwrap();
    let four = q.compose(&q).unwrap().compose(&q).unwrap().compose(&q).unwrap();
    let id_dev = four.max_abs_diff(&AffineSymplecticMap::identity(1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sym = q.symplectic_residual();
    for _ in 0..1000 {
        let d = rng.gen_range(1..=3);
        let seg = ControlSegment::new(
            rng.gen_range(0.0..2.0),
            rng.gen_range(-4.0..4.0),
            (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            0.0,
        );
        sym = sym.max(segment_map(&seg, d).unwrap().symplectic_residual());
    }
    Outcome {
        pass: id_dev <= 1e-12 && sym <= 1e-10,
        detail: format!("four quarter turns vs identity {id_dev:.1e}; max |MᵀJM − J| {sym:.1e} over 1001 segment maps"),
    }
}

fn liouville_desk_check() -> Outcome {
    let grid = PhaseGrid::new([[-12.0, 12.0], [-12.0, 12.0]], [768, 768], 1.0).unwrap();
    let params = LiouvilleTargetParams { alpha: 2.0, t: 0.3, r: -0.4, s: vec![0.1], w: vec![0.2] };
    match liouville::reach_experiment(&DensitySource::standard_gaussian(), &params, &grid, 1e-2, Default::default()) {
        Ok(r) => Outcome {
            pass: r.l1_error <= 1e-2 && r.l2_error <= 1e-2 && r.total_time <= 0.1 && r.mass_error <= 1e-6,
            detail: format!(
                "L1 {:.2e}, L2 {:.2e}, mass error {:.1e}, total time {:.3}, eps {:.2e} on [-12,12]², N = 768",
                r.l1_error, r.l2_error, r.mass_error, r.total_time, r.epsilon
            ),
        },
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
    }
}

fn random_schedule(rng: &mut ChaCha8Rng, d: usize) -> ControlSchedule {
    let n = rng.gen_range(1..=6);
    let segments = (0..n)
        .map(|_| {
            ControlSegment::new(
                rng.gen_range(0.01..1.0),
                rng.gen_range(-3.0..3.0),
                (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect();
    ControlSchedule { d, segments }
}

fn cross_representation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut corr = 0.0f64;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let s = random_schedule(&mut rng, d);
        corr = corr.max(lambda(&simulate(&s).unwrap()).unwrap().max_abs_diff(&schedule_map(&s).unwrap()).unwrap());
    }
    let mut hom = 0.0f64;
    let mut winding_ok = true;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let (a, b) = (random_schedule(&mut rng, d), random_schedule(&mut rng, d));
        let joint = simulate(&a.clone().then(b.clone()).unwrap()).unwrap();
        let split = multiply(&simulate(&a).unwrap(), &simulate(&b).unwrap()).unwrap();
        hom = hom.max(distance(&joint, &split).unwrap());
        winding_ok &= joint.winding == split.winding;
    }
    Outcome {
        pass: corr <= 1e-8 && hom <= 1e-10 && winding_ok,
        detail: format!("Λ(simulate) vs schedule_map {corr:.1e}; simulate(s1∥s2) vs product {hom:.1e}; windings agree: {winding_ok}"),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "structure constants", secs(1), structure_constants),
        run(2, "Ad closed forms", secs(1), ad_closed_forms),
        run(3, "Iwasawa roundtrip", secs(5), iwasawa_roundtrip),
        run(4, "synthesis convergence", secs(10), synthesis_convergence),
        run(5, "metaplectic sign and split-step oracle", secs(60), metaplectic_sign),
        run(6, "quantum reachable family", secs(300), quantum_desk_check),
        run(7, "Liouville periodicity and symplecticity", secs(1), liouville_periodicity),
        run(8, "Liouville reachable family", secs(60), liouville_desk_check),
        run(9, "cross-representation consistency", secs(10), cross_representation),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
