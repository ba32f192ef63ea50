use harmonic_na::abel::{spherical_transform_radial, volume_density, RadialFunction};
use harmonic_na::htype::build_htype;
use harmonic_na::meanvalue::{radial_mean_value, ZonalSphereRule};
use harmonic_na::nagroup::sphere_point;
use harmonic_na::quad::{GaussRule, QuadratureSpec, SphereRule};
use harmonic_na::slowdecrease::{check_slow_decrease, SlowDecreaseWitness};
use harmonic_na::spherical::spherical_phi;
use num_complex::Complex64;

/// `(f ∗ g)(r) = ∫_0^{R_g} g(s) V(s) M_s f(r) ds` for radial `f`, `g`.
#[test]
fn convolution_becomes_multiplication() {
    let alg = build_htype(1, 1).unwrap();
    let spec = QuadratureSpec::default();
    let f = RadialFunction::bump(0.8).unwrap();
    let g = RadialFunction::bump(0.6).unwrap();
    let rule = ZonalSphereRule::new(&alg, 64, 16).unwrap();
    let gauss = GaussRule::new(16);
    let s_nodes: Vec<(f64, f64)> = gauss.composite(&[0.0, 0.2, 0.4, 0.6]);
    let reach = f.support_radius() + g.support_radius();
    let n = 70;
    let rs: Vec<f64> = (0..=n).map(|j| reach * j as f64 / n as f64).collect();
    let conv: Vec<f64> = rs
        .iter()
        .map(|&r| {
            s_nodes
                .iter()
                .map(|&(s, w)| {
                    w * g.eval(s)
                        * volume_density(&alg, s)
                        * radial_mean_value(&alg, &|d| f.eval(d), r, s, &rule).unwrap()
                })
                .sum()
        })
        .collect();
    let fg = RadialFunction::from_samples(&rs, &conv).unwrap();
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for l in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let lam = Complex64::new(l, 0.0);
        let lhs = spherical_transform_radial(&alg, &fg, lam, &spec).unwrap().re;
        let rhs = spherical_transform_radial(&alg, &f, lam, &spec).unwrap().re
            * spherical_transform_radial(&alg, &g, lam, &spec).unwrap().re;
        scale = scale.max(rhs.abs());
        worst = worst.max((lhs - rhs).abs());
    }
    assert!(worst < 1e-3 * scale, "worst {worst:e} scale {scale:e}");
}

/// Sphere average of `e^{Q A/2} cos(λ A)` over `S_t`, the Fourier transform of the
/// Abel transform of the normalized sphere measure.
struct SphereMeasureTransform {
    heights: Vec<(f64, f64)>,
    q: f64,
}

impl SphereMeasureTransform {
    fn new(t: f64) -> Self {
        let alg = build_htype(1, 1).unwrap();
        let rule = SphereRule::new(alg.n(), 40_000, 11).unwrap();
        let heights = rule
            .iter()
            .map(|(omega, w)| (sphere_point(&alg, t, omega).unwrap().t, w))
            .collect();
        Self { heights, q: alg.q() }
    }

    fn eval(&self, lam: Complex64) -> Complex64 {
        self.heights
            .iter()
            .map(|&(a, w)| (lam * a).cos() * (w * (0.5 * self.q * a).exp()))
            .sum()
    }
}

#[test]
fn sphere_measure_projection_slice() {
    let alg = build_htype(1, 1).unwrap();
    let t = 1.0;
    let sm = SphereMeasureTransform::new(t);
    for lam in [Complex64::new(0.0, 0.0), Complex64::new(2.5, 0.0), Complex64::new(6.0, 1.2), Complex64::new(1.0, -0.7)] {
        let a = sm.eval(lam);
        let b = spherical_phi(&alg, lam, t).unwrap();
        assert!((a - b).norm() < 1e-6, "λ = {lam}: {a} vs {b}");
    }
    let mut w = SlowDecreaseWitness::new(0.5, 0.1, 1.0, 1.0, 0.0, 20.0).unwrap();
    w.xi_points = 21;
    w.disc_samples = 64;
    let from_measure = check_slow_decrease(&|z| Ok(sm.eval(z)), &w).unwrap();
    let from_phi = check_slow_decrease(&|z| spherical_phi(&alg, z, t), &w).unwrap();
    assert_eq!(from_measure.pass, from_phi.pass);
    assert!(from_phi.pass);
    assert!((from_measure.margin - from_phi.margin).abs() < 1e-4);
}
