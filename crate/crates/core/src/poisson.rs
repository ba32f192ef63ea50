//! Poisson kernel, the functions `𝒫_λ`, Helgason–Fourier and Radon transforms.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{check_len, Error, Result};
use crate::htype::HTypeAlgebra;
use crate::nagroup::{
    geodesic_inversion, inverse_unchecked, left_invariant_derivative, multiply_unchecked, sphere_point, FieldIndex,
    NAPoint,
};
use crate::quad::{integrate_n_biradial, GaussRule, QuadratureSpec};
use crate::special::gamma_real;

/// A complex spectral parameter.
pub type SpectralPoint = Complex64;

/// Largest share of a Poisson-type integral allowed beyond the truncation
/// box; the share itself is integrated through the tail map, not dropped.
pub(crate) const TAIL_SHARE: f64 = 1e-3;

/// `c_{m,k} = 2^{k-1} π^{-n/2} Γ(n/2)`.
pub fn poisson_constant(alg: &HTypeAlgebra) -> f64 {
    let n = alg.n() as f64;
    2f64.powi(alg.k() as i32 - 1) * std::f64::consts::PI.powf(-n / 2.0) * gamma_real(n / 2.0)
}

/// `P_a(X, Z)` as a function of `|X|²` and `|Z|²`.
pub fn poisson_kernel_sq(alg: &HTypeAlgebra, a: f64, x2: f64, z2: f64) -> f64 {
    LnPoisson::new(alg).eval(a, x2, z2).exp()
}

/// `ln P_a` with the normalizing constant precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LnPoisson {
    q: f64,
    ln_c: f64,
}

impl LnPoisson {
    pub fn new(alg: &HTypeAlgebra) -> Self {
        Self {
            q: alg.q(),
            ln_c: poisson_constant(alg).ln(),
        }
    }

    pub fn eval(&self, a: f64, x2: f64, z2: f64) -> f64 {
        let s = a + 0.25 * x2;
        self.ln_c + self.q * (a.ln() - (s * s + z2).ln())
    }
}

/// `P_a(X, Z) = c_{m,k} a^Q ((a + |X|²/4)² + |Z|²)^{-Q}`.
pub fn poisson_kernel(alg: &HTypeAlgebra, a: f64, x: &[f64], z: &[f64]) -> Result<f64> {
    check_len(alg.m(), x.len())?;
    check_len(alg.k(), z.len())?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a = {a} must be positive")));
    }
    let x2 = x.iter().map(|v| v * v).sum();
    let z2 = z.iter().map(|v| v * v).sum();
    Ok(poisson_kernel_sq(alg, a, x2, z2))
}

/// `∫_N P_a dn`.
pub fn poisson_mass(alg: &HTypeAlgebra, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lp = LnPoisson::new(alg);
    let g = move |u: f64, v: f64| lp.eval(a, u * u, v * v).exp();
    let spec = spec.clone().with_poisson_truncation(a.ln().abs());
    Ok(integrate_n_biradial(g, alg, &spec, TAIL_SHARE)?.value)
}

/// `n0^{-1} n` for `n = (X, Z)`.
fn left_translate_n(alg: &HTypeAlgebra, x: &[f64], z: &[f64], x0: &[f64], z0: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let br = alg.bracket_unchecked(x0, x);
    let dx = x.iter().zip(x0).map(|(a, b)| a - b).collect();
    let dz = (0..alg.k()).map(|i| z[i] - z0[i] - 0.5 * br[i]).collect();
    (dx, dz)
}

/// `P^{s}` for positive `p` and complex `s`.
fn positive_pow(p: f64, s: Complex64) -> Complex64 {
    (s * p.ln()).exp()
}

/// `𝒫_λ(x, n0) = P_a(n0^{-1} n)^{1/2 - iλ/Q}` for `x = n a`.
pub fn p_lambda(alg: &HTypeAlgebra, lambda: SpectralPoint, x: &NAPoint, x0: &[f64], z0: &[f64]) -> Result<Complex64> {
    check_len(alg.m(), x.x.len())?;
    check_len(alg.k(), x.z.len())?;
    check_len(alg.m(), x0.len())?;
    check_len(alg.k(), z0.len())?;
    Ok(p_lambda_unchecked(alg, lambda, x, x0, z0))
}

pub(crate) fn p_lambda_unchecked(alg: &HTypeAlgebra, lambda: Complex64, x: &NAPoint, x0: &[f64], z0: &[f64]) -> Complex64 {
    let (dx, dz) = left_translate_n(alg, &x.x, &x.z, x0, z0);
    let x2 = dx.iter().map(|v| v * v).sum();
    let z2 = dz.iter().map(|v| v * v).sum();
    (exponent(alg, lambda) * LnPoisson::new(alg).eval(x.a(), x2, z2)).exp()
}

fn exponent(alg: &HTypeAlgebra, lambda: Complex64) -> Complex64 {
    Complex64::new(0.5, 0.0) - Complex64::i() * lambda / alg.q()
}

/// Horospherical form `c^{1/2 - iλ/Q} e^{(Q/2 - iλ) A(σ(n0^{-1} x))}`.
pub fn p_lambda_horospherical(
    alg: &HTypeAlgebra,
    lambda: SpectralPoint,
    x: &NAPoint,
    x0: &[f64],
    z0: &[f64],
) -> Result<Complex64> {
    let n0 = NAPoint::from_log(alg, x0.to_vec(), z0.to_vec(), 0.0)?;
    check_len(alg.m(), x.x.len())?;
    check_len(alg.k(), x.z.len())?;
    let y = geodesic_inversion(alg, &multiply_unchecked(alg, &inverse_unchecked(&n0), x))?;
    let e = exponent(alg, lambda);
    Ok(positive_pow(poisson_constant(alg), e) * (e * alg.q() * y.t).exp())
}

/// Box containing `B_R` at fixed `a = e^t`: `(|X|_max, |Z|_max)`.
fn slice_bounds(t: f64, r: f64) -> (f64, f64) {
    let a = t.exp();
    let c = (0.5 * r).cosh();
    let w_max = 2.0 * a.sqrt() * c;
    let umax = (4.0 * (w_max - 1.0 - a)).max(0.0).sqrt();
    let vmax = (w_max * w_max - (1.0 + a) * (1.0 + a)).max(0.0).sqrt();
    (umax, vmax)
}

fn require_desk(alg: &HTypeAlgebra) -> Result<()> {
    if alg.m() == 2 && alg.k() == 1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "full NA-quadrature is limited to the desk algebra (k = 1, m = 2)".into(),
        ))
    }
}

/// `∫ g(X, Z) dX dZ` over the slice `{(X, Z) : d(X, Z, e^t) ≤ r}` of the
/// desk algebra.
fn integrate_ball_slice<T>(g: &(dyn Fn(&[f64], &[f64]) -> T + Sync), t: f64, r: f64, rule: &GaussRule, panels: usize) -> T
where
    T: crate::quad::Integrand,
{
    let (umax, vmax) = slice_bounds(t, r);
    let mut acc = T::default();
    if umax <= 0.0 || vmax <= 0.0 {
        return acc;
    }
    let nth = 4 * rule.len() * panels;
    let dth = 2.0 * std::f64::consts::PI / nth as f64;
    let us = rule.composite(&crate::quad::uniform_breaks(0.0, umax, panels));
    let zs = rule.composite(&crate::quad::uniform_breaks(-vmax, vmax, 2 * panels));
    let mut x = [0.0; 2];
    for &(u, wu) in &us {
        for j in 0..nth {
            let th = dth * j as f64;
            x[0] = u * th.cos();
            x[1] = u * th.sin();
            for &(z, wz) in &zs {
                acc += g(&x, &[z]) * (u * wu * wz * dth);
            }
        }
    }
    acc
}

/// `f̃(λ, n0) = ∫_{NA} f(x) 𝒫_λ(x, n0) dx` for `f` supported in `B_R`.
///
/// Limited to the desk algebra.
pub fn helgason_fourier(
    alg: &HTypeAlgebra,
    f: &(dyn Fn(&NAPoint) -> f64 + Sync),
    support: f64,
    lambda: SpectralPoint,
    x0: &[f64],
    z0: &[f64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    require_desk(alg)?;
    check_len(2, x0.len())?;
    check_len(1, z0.len())?;
    let rule = GaussRule::new(spec.nodes_1d);
    let panels = (spec.panels / 6).max(2);
    let ts = rule.composite(&crate::quad::uniform_breaks(-support, support, 2 * panels));
    let q = alg.q();
    let val: Complex64 = ts
        .par_iter()
        .map(|&(t, wt)| {
            let g = |x: &[f64], z: &[f64]| -> Complex64 {
                let p = NAPoint { x: x.to_vec(), z: z.to_vec(), t };
                let fv = f(&p);
                if fv == 0.0 {
                    return Complex64::default();
                }
                p_lambda_unchecked(alg, lambda, &p, x0, z0) * fv
            };
            integrate_ball_slice(&g, t, support, &rule, panels) * (wt * (-q * t).exp())
        })
        .sum();
    if val.re.is_finite() && val.im.is_finite() {
        Ok(val)
    } else {
        Err(Error::Quadrature("non-finite Helgason–Fourier integrand".into()))
    }
}

/// `f̂(a, n0) = a^{-Q/2} ∫_N f(n0 σ(n a)) dn` for `f` supported in `B_R`.
///
/// Limited to the desk algebra.
pub fn radon_transform(
    alg: &HTypeAlgebra,
    f: &(dyn Fn(&NAPoint) -> f64 + Sync),
    support: f64,
    a: f64,
    x0: &[f64],
    z0: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    require_desk(alg)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a = {a} must be positive")));
    }
    let n0 = NAPoint::from_log(alg, x0.to_vec(), z0.to_vec(), 0.0)?;
    let reach = support + crate::nagroup::distance_to_origin(alg, &n0)?;
    let t = a.ln();
    if t.abs() > reach {
        return Ok(0.0);
    }
    let rule = GaussRule::new(spec.nodes_1d);
    let panels = (spec.panels / 4).max(2);
    let g = |x: &[f64], z: &[f64]| -> f64 {
        let p = NAPoint { x: x.to_vec(), z: z.to_vec(), t };
        let y = geodesic_inversion(alg, &p).expect("valid point");
        f(&multiply_unchecked(alg, &n0, &y))
    };
    let v = integrate_ball_slice(&g, t, reach, &rule, panels) * (-0.5 * alg.q() * t).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature("non-finite Radon integrand".into()))
    }
}

/// Result of a derivative-bound spot check.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBoundReport {
    pub max_ratio: f64,
    pub samples: usize,
}

/// Max over sampled `x ∈ B_R` of
/// `|𝕏_J 𝒫_λ(x, n0)| / (e^{R|Im λ|} (1+|λ|)^{|J|} P_1(n0)^{1/2 + Im λ/Q})`.
#[allow(clippy::too_many_arguments)]
pub fn check_p_lambda_derivative_bound(
    alg: &HTypeAlgebra,
    radius: f64,
    lambda: SpectralPoint,
    x0: &[f64],
    z0: &[f64],
    multi: &[FieldIndex],
    samples: usize,
    seed: u64,
) -> Result<DerivativeBoundReport> {
    if multi.len() > 2 {
        return Err(Error::InvalidArgument("multi-index order above 2".into()));
    }
    let origin = NAPoint::identity(alg);
    let p1 = p_lambda(alg, Complex64::new(0.0, alg.q() / 2.0), &origin, x0, z0)?.re;
    let denom = (radius * lambda.im.abs()).exp()
        * (1.0 + lambda.norm()).powi(multi.len() as i32)
        * p1.powf(0.5 + lambda.im / alg.q());
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = alg.n();
    let mut max_ratio = 0.0f64;
    for _ in 0..samples {
        let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
        let mut w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let nrm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        w.iter_mut().for_each(|v| *v /= nrm);
        let x = sphere_point(alg, r, &w)?;
        let re = |p: &NAPoint| p_lambda_unchecked(alg, lambda, p, x0, z0).re;
        let im = |p: &NAPoint| p_lambda_unchecked(alg, lambda, p, x0, z0).im;
        let dre = left_invariant_derivative(alg, &re, &x, multi)?;
        let dim = left_invariant_derivative(alg, &im, &x, multi)?;
        max_ratio = max_ratio.max(dre.hypot(dim) / denom);
    }
    Ok(DerivativeBoundReport { max_ratio, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::build_htype;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kernel_at_origin_and_symmetry() {
        let g = build_htype(1, 1).unwrap();
        let c = poisson_constant(&g);
        // c_{2,1} = π^{-2} Γ(2)
        assert_abs_diff_eq!(c, 1.0 / (std::f64::consts::PI.powi(2)), epsilon = 1e-16);
        assert_abs_diff_eq!(poisson_kernel(&g, 1.0, &[0.0, 0.0], &[0.0]).unwrap(), c, epsilon = 1e-16);
        let a = poisson_kernel(&g, 0.7, &[0.3, -1.0], &[2.0]).unwrap();
        let b = poisson_kernel(&g, 0.7, &[-0.3, 1.0], &[-2.0]).unwrap();
        assert_eq!(a, b);
        assert!(poisson_kernel(&g, 0.0, &[0.0, 0.0], &[0.0]).is_err());
    }

    #[test]
    fn p_lambda_special_values() {
        let g = build_htype(1, 1).unwrap();
        let x = NAPoint::new(&g, vec![0.2, 0.5], vec![-0.4], 1.3).unwrap();
        let (x0, z0) = ([0.7, -0.1], [0.9]);
        // exponent 1/2 - iλ/Q is 1 at λ = iQ/2 and 0 at λ = -iQ/2
        let full = p_lambda(&g, Complex64::new(0.0, 1.0), &x, &x0, &z0).unwrap();
        let trivial = p_lambda(&g, Complex64::new(0.0, -1.0), &x, &x0, &z0).unwrap();
        assert!((trivial - 1.0).norm() < 1e-15);
        let (dx, dz) = left_translate_n(&g, &x.x, &x.z, &x0, &z0);
        let pk = poisson_kernel(&g, x.a(), &dx, &dz).unwrap();
        assert_abs_diff_eq!(full.re, pk, epsilon = 1e-15);
        assert_abs_diff_eq!(full.im, 0.0, epsilon = 1e-15);
        let e = NAPoint::identity(&g);
        let lam = Complex64::new(1.5, 0.3);
        let at_e = p_lambda(&g, lam, &e, &x0, &z0).unwrap();
        let p1 = poisson_kernel(&g, 1.0, &x0, &z0).unwrap();
        let want = positive_pow(p1, exponent(&g, lam));
        assert!((at_e - want).norm() < 1e-15);
    }
}
