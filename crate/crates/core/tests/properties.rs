use harmonic_na::abel::{abel_transform, RadialFunction};
use harmonic_na::htype::{build_htype, HTypeAlgebra};
use harmonic_na::nagroup::{
    cayley, cayley_inverse, distance, distance_to_origin, geodesic_inversion, inverse, multiply, sphere_point, NAPoint,
};
use harmonic_na::quad::QuadratureSpec;
use harmonic_na::slowdecrease::{check_slow_decrease, SlowDecreaseWitness};
use harmonic_na::spherical::spherical_phi;
use num_complex::Complex64;
use proptest::prelude::*;

fn algebra(k: usize) -> HTypeAlgebra {
    build_htype(k, 1).unwrap()
}

fn point(alg: &HTypeAlgebra, raw: &[f64]) -> NAPoint {
    let (m, k) = (alg.m(), alg.k());
    NAPoint::from_log(alg, raw[..m].to_vec(), raw[m..m + k].to_vec(), raw[m + k]).unwrap()
}

fn close(p: &NAPoint, q: &NAPoint, tol: f64) -> bool {
    p.to_flat()
        .iter()
        .zip(q.to_flat())
        .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0))
}

fn raw_point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law_is_associative(k in 1usize..=3, a in raw_point(), b in raw_point(), c in raw_point()) {
        let alg = algebra(k);
        let (p, q, r) = (point(&alg, &a), point(&alg, &b), point(&alg, &c));
        let lhs = multiply(&alg, &multiply(&alg, &p, &q).unwrap(), &r).unwrap();
        let rhs = multiply(&alg, &p, &multiply(&alg, &q, &r).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn inverse_undoes_multiplication(k in 1usize..=3, a in raw_point()) {
        let alg = algebra(k);
        let p = point(&alg, &a);
        let e = NAPoint::identity(&alg);
        prop_assert!(close(&multiply(&alg, &p, &inverse(&alg, &p).unwrap()).unwrap(), &e, 1e-12));
    }

    #[test]
    fn distance_is_left_invariant_and_symmetric(k in 1usize..=3, a in raw_point(), b in raw_point(), c in raw_point()) {
        let alg = algebra(k);
        let (p, q, g) = (point(&alg, &a), point(&alg, &b), point(&alg, &c));
        let d = distance(&alg, &p, &q).unwrap();
        let dg = distance(&alg, &multiply(&alg, &g, &p).unwrap(), &multiply(&alg, &g, &q).unwrap()).unwrap();
        prop_assert!((d - dg).abs() < 1e-9 * d.max(1.0));
        prop_assert!((d - distance(&alg, &q, &p).unwrap()).abs() < 1e-9 * d.max(1.0));
    }

    #[test]
    fn triangle_inequality(k in 1usize..=3, a in raw_point(), b in raw_point(), c in raw_point()) {
        let alg = algebra(k);
        let (p, q, r) = (point(&alg, &a), point(&alg, &b), point(&alg, &c));
        let pq = distance(&alg, &p, &q).unwrap();
        let qr = distance(&alg, &q, &r).unwrap();
        let pr = distance(&alg, &p, &r).unwrap();
        prop_assert!(pr <= pq + qr + 1e-9);
    }

    #[test]
    fn cayley_round_trip_and_radius(k in 1usize..=3, a in raw_point()) {
        let alg = algebra(k);
        let p = point(&alg, &a);
        let b = cayley(&alg, &p).unwrap();
        prop_assert!(b.radius() < 1.0);
        prop_assert!((b.radius() - (0.5 * distance_to_origin(&alg, &p).unwrap()).tanh()).abs() < 1e-12);
        prop_assert!(close(&cayley_inverse(&alg, &b).unwrap(), &p, 1e-10));
    }

    #[test]
    fn geodesic_inversion_is_an_involution(k in 1usize..=3, a in raw_point()) {
        let alg = algebra(k);
        let p = point(&alg, &a);
        let back = geodesic_inversion(&alg, &geodesic_inversion(&alg, &p).unwrap()).unwrap();
        prop_assert!(close(&back, &p, 1e-10));
        let d = distance_to_origin(&alg, &p).unwrap();
        prop_assert!((distance_to_origin(&alg, &geodesic_inversion(&alg, &p).unwrap()).unwrap() - d).abs() < 1e-9 * d.max(1.0));
    }

    #[test]
    fn sphere_points_lie_on_the_sphere(k in 1usize..=3, r in 0.05f64..3.0, dir in prop::collection::vec(-1.0f64..1.0, 8)) {
        let alg = algebra(k);
        let n = alg.n();
        let norm = dir[..n].iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let omega: Vec<f64> = dir[..n].iter().map(|v| v / norm).collect();
        let y = sphere_point(&alg, r, &omega).unwrap();
        prop_assert!((distance_to_origin(&alg, &y).unwrap() - r).abs() < 1e-10 * r.max(1.0));
    }

    #[test]
    fn spherical_function_is_even_and_bounded(k in 1usize..=3, l in 0.0f64..20.0, r in 0.0f64..4.0) {
        let alg = algebra(k);
        let a = spherical_phi(&alg, Complex64::new(l, 0.0), r).unwrap();
        let b = spherical_phi(&alg, Complex64::new(-l, 0.0), r).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
        prop_assert!(a.im.abs() < 1e-12);
        prop_assert!(a.re.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn abel_transform_is_even(t in 0.0f64..0.9) {
        let alg = algebra(1);
        let f = RadialFunction::bump(1.0).unwrap();
        let spec = QuadratureSpec::default();
        let a = abel_transform(&alg, &f, t, &spec).unwrap();
        let b = abel_transform(&alg, &f, -t, &spec).unwrap();
        prop_assert!((a - b).abs() < 1e-14 * a.abs().max(1e-300));
        prop_assert!(a >= 0.0);
    }
}

fn sample_target(z: Complex64) -> harmonic_na::Result<Complex64> {
    Ok((z.cos() + 0.5 * (z * 2f64.sqrt()).cos()) / (z * z + 4.0).sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Shrinking `B`, raising `C` or raising `D` keeps a passing witness passing.
    #[test]
    fn witness_monotonicity(
        b in 1e-4f64..1.0,
        d in 0.0f64..4.0,
        shrink in 0.0f64..1.0,
        dc in 0.0f64..5.0,
        dd in 0.0f64..3.0,
    ) {
        let mut w = SlowDecreaseWitness::new(1.0, b, 1.0, d, 0.0, 40.0).unwrap();
        w.xi_points = 41;
        w.disc_samples = 64;
        let base = check_slow_decrease(&sample_target, &w).unwrap();
        let weaker = SlowDecreaseWitness { b: b * shrink.max(1e-6), c: w.c + dc, d: d + dd, ..w };
        let after = check_slow_decrease(&sample_target, &weaker).unwrap();
        if base.pass {
            prop_assert!(after.pass);
        }
        prop_assert!(after.margin >= base.margin - 1e-12);
    }
}
