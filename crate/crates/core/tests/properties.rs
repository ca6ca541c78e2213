use proptest::prelude::*;
use reachkit::lie::*;
use reachkit::liouville::{lambda, schedule_map};
use reachkit::schedule::{ControlSchedule, ControlSegment};
use reachkit::sim::simulate;

fn algebra(d: usize, scale: f64) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(-scale..scale, 3 + 2 * d + 1)
        .prop_map(move |v| AlgebraElement::from_coefficients(d, &v).unwrap())
}

fn segment(d: usize) -> impl Strategy<Value = ControlSegment> {
    (0.01f64..1.0, -3.0f64..3.0, prop::collection::vec(-2.0f64..2.0, d), -1.0f64..1.0)
        .prop_map(|(dt, u0, u, r)| ControlSegment::new(dt, u0, u, r))
}

fn schedule(d: usize) -> impl Strategy<Value = ControlSchedule> {
    prop::collection::vec(segment(d), 0..6).prop_map(move |segments| ControlSchedule { d, segments })
}

fn group(d: usize) -> impl Strategy<Value = GroupElement> {
    algebra(d, 1.5).prop_map(|x| exp(&x).unwrap())
}

proptest! {
    #[test]
    fn jacobi(x in algebra(2, 2.0), y in algebra(2, 2.0), z in algebra(2, 2.0)) {
        let t1 = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let t2 = bracket(&y, &bracket(&z, &x).unwrap()).unwrap();
        let t3 = bracket(&z, &bracket(&x, &y).unwrap()).unwrap();
        let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
        prop_assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn one_parameter_subgroups(x in algebra(1, 1.0), s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let lhs = multiply(&exp(&x.scale(s)).unwrap(), &exp(&x.scale(t)).unwrap()).unwrap();
        let rhs = exp(&x.scale(s + t)).unwrap();
        prop_assert!(distance_strict(&lhs, &rhs).unwrap() < 1e-9);
    }

    #[test]
    fn second_order_bch(x in algebra(2, 1.0), y in algebra(2, 1.0)) {
        // exp(hX) exp(hY) = exp(h(X+Y) + h²/2 [X,Y] + O(h³))
        let err = |h: f64| {
            let lhs = multiply(&exp(&x.scale(h)).unwrap(), &exp(&y.scale(h)).unwrap()).unwrap();
            let gen = x.add(&y).unwrap().scale(h).add(&bracket(&x, &y).unwrap().scale(h * h / 2.0)).unwrap();
            distance(&lhs, &exp(&gen).unwrap()).unwrap()
        };
        let (e1, e2) = (err(1e-2), err(5e-3));
        prop_assert!(e1 < 1e-4);
        prop_assert!(e2 < e1 / 6.0 || e1 < 1e-12);
    }

    #[test]
    fn adjoint_is_a_morphism(g in group(2), h in group(2), x in algebra(2, 1.0)) {
        let gh = multiply(&g, &h).unwrap();
        let lhs = ad(&gh, &x).unwrap();
        let rhs = ad(&g, &ad(&h, &x).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn adjoint_matches_conjugation(g in group(1), x in algebra(1, 0.5)) {
        // g exp(x) g⁻¹ = exp(Ad_g x)
        let lhs = multiply(&multiply(&g, &exp(&x).unwrap()).unwrap(), &inverse(&g)).unwrap();
        let rhs = exp(&ad(&g, &x).unwrap()).unwrap();
        prop_assert!(distance(&lhs, &rhs).unwrap() < 1e-9);
    }

    #[test]
    fn inverse_cancels(g in group(3)) {
        let e = multiply(&g, &inverse(&g)).unwrap();
        prop_assert!(distance_strict(&e, &GroupElement::identity(3)).unwrap() < 1e-10);
        prop_assert_eq!(e.winding, 0);
    }

    #[test]
    fn iwasawa_roundtrip(g in group(1)) {
        let f = iwasawa(&g.s).unwrap();
        prop_assert!((0.0..std::f64::consts::TAU).contains(&f.t1));
        let back = f.recompose();
        prop_assert!((back - g.s).frobenius() < 1e-10 * (1.0 + g.s.frobenius()));
    }

    #[test]
    fn simulate_is_a_homomorphism(a in schedule(2), b in schedule(2)) {
        let joint = simulate(&a.clone().then(b.clone()).unwrap()).unwrap();
        let split = multiply(&simulate(&a).unwrap(), &simulate(&b).unwrap()).unwrap();
        prop_assert!(distance_strict(&joint, &split).unwrap() < 1e-10 * (1.0 + joint.s.frobenius()));
    }

    #[test]
    fn classical_correspondence(s in schedule(2)) {
        let via_group = lambda(&simulate(&s).unwrap()).unwrap();
        let direct = schedule_map(&s).unwrap();
        prop_assert!(via_group.max_abs_diff(&direct).unwrap() < 1e-8);
        prop_assert!(direct.symplectic_residual() < 1e-10 * (1.0 + direct.m.iter().map(|v| v * v).sum::<f64>()));
    }

    #[test]
    fn schedule_json_is_bit_exact(s in schedule(3)) {
        let back = ControlSchedule::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
