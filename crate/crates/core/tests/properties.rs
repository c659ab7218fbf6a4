use std::f64::consts::TAU;

use lh_core::equivariant::{project_biequivariant, separation_witness, BumpProfile, GFn};
use lh_core::groups::{
    cartan, cartan_radius, iwasawa, make_a, make_k, make_n, psi, IwasawaCoords, LorentzMatrix, SL2Matrix,
};
use lh_core::hyperbolic::{act, phi, Exponent, HPoint};
use lh_core::lie::{algebra_defect, bracket, exp_matrix, LieElement};
use lh_core::reps::{InducedRep, RepMatrix, GUARD_MODES};
use lh_core::Complex64;
use proptest::prelude::*;

fn group_element(range: f64) -> impl Strategy<Value = LorentzMatrix> {
    (-range..range, -range..range, 0.0..TAU).prop_map(|(t, u, th)| IwasawaCoords::new(t, u, th).to_matrix())
}

fn sl2_element() -> impl Strategy<Value = SL2Matrix> {
    (-1.0..1.0f64, -2.0..2.0f64, 0.0..TAU).prop_map(|(t, u, th)| {
        SL2Matrix::diagonal(t) * SL2Matrix::upper(u) * SL2Matrix::rotation(th)
    })
}

fn h_point() -> impl Strategy<Value = HPoint> {
    (-2.0..2.0f64, 0.3..3.0f64).prop_map(|(x, y)| HPoint { x, y })
}

fn lie_element() -> impl Strategy<Value = LieElement> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| LieElement::from_coords(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_is_multiplicative(a in sl2_element(), b in sl2_element()) {
        let lhs = psi(&(a * b)).unwrap();
        let rhs = psi(&a).unwrap() * psi(&b).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-11);
    }

    #[test]
    fn psi_on_one_parameter_subgroups(x in -1.5..1.5f64) {
        prop_assert!(psi(&SL2Matrix::rotation(x)).unwrap().distance(&make_k(2.0 * x).unwrap()) < 1e-12);
        prop_assert!(psi(&SL2Matrix::diagonal(x)).unwrap().distance(&make_a(2.0 * x).unwrap()) < 1e-12);
        prop_assert!(psi(&SL2Matrix::upper(x)).unwrap().distance(&make_n(x).unwrap()) < 1e-12);
    }

    #[test]
    fn iwasawa_recovers_coordinates(t in -3.0..3.0f64, u in -3.0..3.0f64, th in 0.0..TAU) {
        let c = iwasawa(&IwasawaCoords::new(t, u, th).to_matrix());
        prop_assert!((c.t - t).abs() < 1e-10);
        prop_assert!((c.u - u).abs() < 1e-10);
        let dth = (c.theta - th).abs();
        prop_assert!(dth.min(TAU - dth) < 1e-10);
    }

    #[test]
    fn cartan_recomposes(g in group_element(2.0)) {
        prop_assert!(cartan(&g).to_matrix().distance(&g) < 1e-9);
    }

    #[test]
    fn cartan_radius_is_bi_invariant(g in group_element(2.0), a in 0.0..TAU, b in 0.0..TAU) {
        let moved = make_k(a).unwrap() * g * make_k(b).unwrap();
        prop_assert!((cartan_radius(&moved) - cartan_radius(&g)).abs() < 1e-10);
    }

    #[test]
    fn brackets_stay_in_the_algebra(x in lie_element(), y in lie_element()) {
        prop_assert!(algebra_defect(bracket(&x, &y).matrix()) < 1e-13);
    }

    #[test]
    fn exp_intertwines_conjugation(x in lie_element(), g in group_element(1.0)) {
        let lhs = exp_matrix(&x.conjugate_by(&g));
        let rhs = g * exp_matrix(&x) * g.inverse();
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn action_is_a_group_action(a in group_element(1.5), b in group_element(1.5), z in h_point()) {
        let lhs = act(&(a * b), &z);
        let rhs = act(&a, &act(&b, &z));
        prop_assert!((lhs.x - rhs.x).abs() < 1e-10 * (1.0 + lhs.x.abs()));
        prop_assert!((lhs.y - rhs.y).abs() < 1e-10 * (1.0 + lhs.y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spherical_function_is_k_invariant(th in 0.0..TAU, x in -1.0..1.0f64, y in 0.5..2.0f64, re in 0.1..0.9f64, im in -2.0..2.0f64) {
        let w = Exponent::new(Complex64::new(re, im)).unwrap();
        let z = HPoint { x, y };
        let kz = act(&make_k(th).unwrap(), &z);
        prop_assert!((phi(&w, &kz, 512) - phi(&w, &z, 512)).norm() < 1e-10);
    }

    #[test]
    fn spherical_function_reflection(x in -1.0..1.0f64, y in 0.5..2.0f64, re in 0.1..0.9f64, im in -2.0..2.0f64) {
        let w = Exponent::new(Complex64::new(re, im)).unwrap();
        let z = HPoint { x, y };
        prop_assert!((phi(&w, &z, 512) - phi(&w.reflected(), &z, 512)).norm() < 1e-8);
    }

    #[test]
    fn rep_matrix_is_multiplicative(a in group_element(0.02), b in group_element(0.02), nu in 0.5..3.0f64) {
        let rep = InducedRep::new(Complex64::new(0.0, nu));
        let (trunc, nodes) = (24, 100);
        let ma = RepMatrix::new(&rep, &a, trunc, nodes).unwrap();
        let mb = RepMatrix::new(&rep, &b, trunc, nodes).unwrap();
        let mab = RepMatrix::new(&rep, &(a * b), trunc, nodes).unwrap();
        let prod = ma.matrix() * mb.matrix();
        prop_assert!(RepMatrix::central_distance(mab.matrix(), &prod, trunc, GUARD_MODES) < 1e-6);
    }

    #[test]
    fn rep_matrix_is_multiplicative_with_wide_guard(a in group_element(0.25), b in group_element(0.25)) {
        // mode n of ρ(g) spreads over roughly |n|·|g − 1| neighbours
        let rep = InducedRep::new(Complex64::new(0.0, 1.0));
        let (trunc, nodes) = (64, 260);
        let ma = RepMatrix::new(&rep, &a, trunc, nodes).unwrap();
        let mb = RepMatrix::new(&rep, &b, trunc, nodes).unwrap();
        let mab = RepMatrix::new(&rep, &(a * b), trunc, nodes).unwrap();
        let prod = ma.matrix() * mb.matrix();
        prop_assert!(RepMatrix::central_distance(mab.matrix(), &prod, trunc, 32) < 1e-6);
    }

    #[test]
    fn matcoef_phase_law(g in group_element(1.0), a in 0.0..TAU, b in 0.0..TAU, n in -3i64..=3, m in -3i64..=3) {
        let rep = InducedRep::new(Complex64::new(0.0, 1.3));
        let moved = make_k(a).unwrap() * g * make_k(b).unwrap();
        let lhs = rep.matcoef(&moved, n, m, 256);
        let rhs = rep.matcoef(&g, n, m, 256) * Complex64::cis(n as f64 * b + m as f64 * a);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn witness_modulus_is_bi_invariant(g in group_element(1.0), a in 0.0..TAU, b in 0.0..TAU, n in -4i64..=4) {
        let f = separation_witness(n, BumpProfile::new(0.7, 0.5).unwrap());
        let moved = make_k(a).unwrap() * g * make_k(b).unwrap();
        prop_assert!((f.eval(&moved).norm() - f.eval(&g).norm()).abs() < 1e-10);
        prop_assert!((f.eval(&moved) - f.eval(&g) * Complex64::cis(n as f64 * (a + b))).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn projection_is_idempotent(g in group_element(1.0), n in -6i64..=6, c in -1.0..1.0f64) {
        let f: GFn = std::sync::Arc::new(move |x: &LorentzMatrix| {
            let m = x.matrix();
            Complex64::new(m[(0, 2)] + c * m[(1, 1)], m[(2, 0)] * m[(0, 1)]) * (-m.norm_squared() / 6.0).exp()
        });
        let p = project_biequivariant(f, n, 32);
        let pp = project_biequivariant(p.as_gfn(), n, 16);
        prop_assert!((pp.eval(&g) - p.eval(&g)).norm() < 1e-9);
    }
}
