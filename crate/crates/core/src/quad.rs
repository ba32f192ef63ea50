//! Quadrature: composite Gauss–Legendre panels, bi-radial integrals over `N`,
//! and rotated product-Gauss rules on spheres.

use std::num::NonZeroUsize;
use std::ops::{AddAssign, Mul};

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::htype::HTypeAlgebra;
use crate::special::sphere_area;

/// Values that can be accumulated by a quadrature rule.
pub trait Integrand: Copy + Default + AddAssign + Mul<f64, Output = Self> {
    fn is_finite_value(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for num_complex::Complex64 {
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub nodes_1d: usize,
    pub panels: usize,
    pub truncation_radius_x: f64,
    pub truncation_radius_z: f64,
    pub sphere_nodes: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_1d: 16,
            panels: 24,
            truncation_radius_x: 40.0,
            truncation_radius_z: 40.0,
            sphere_nodes: 20_000,
            seed: 0x5eed,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_1d == 0 || self.panels == 0 || self.sphere_nodes == 0 {
            return Err(Error::InvalidArgument("quadrature counts must be positive".into()));
        }
        if !(self.truncation_radius_x > 0.0 && self.truncation_radius_z > 0.0) {
            return Err(Error::InvalidArgument("truncation radii must be positive".into()));
        }
        Ok(())
    }

    /// Radii suited to Poisson-type integrands centred at scale `e^{R}`.
    pub fn with_poisson_truncation(mut self, r: f64) -> Self {
        self.truncation_radius_x = 40.0 * (r / 2.0).exp().max(1.0);
        self.truncation_radius_z = 40.0 * r.exp().max(1.0);
        self
    }
}

/// A Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let n = NonZeroUsize::new(n.max(1)).expect("positive");
        let (nodes, weights) = GaussLegendre::new(n).as_node_weight_pairs().iter().copied().unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<T: Integrand>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let mut acc = T::default();
        for (x, w) in self.mapped(a, b) {
            acc += f(x) * w;
        }
        acc
    }

    /// Composite rule over consecutive breakpoints.
    pub fn integrate_breaks<T: Integrand>(&self, breaks: &[f64], mut f: impl FnMut(f64) -> T) -> T {
        let mut acc = T::default();
        for w in breaks.windows(2) {
            acc += self.integrate(w[0], w[1], &mut f);
        }
        acc
    }

    /// Composite rule with `panels` equal panels.
    pub fn integrate_panels<T: Integrand>(&self, a: f64, b: f64, panels: usize, f: impl FnMut(f64) -> T) -> T {
        self.integrate_breaks(&uniform_breaks(a, b, panels), f)
    }

    /// Flattened composite nodes and weights over the breakpoints.
    pub fn composite(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        breaks.windows(2).flat_map(|w| self.mapped(w[0], w[1]).collect::<Vec<_>>()).collect()
    }
}

pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let p = panels.max(1);
    (0..=p).map(|j| a + (b - a) * j as f64 / p as f64).collect()
}

/// Breakpoints on `[0, r]` clustered quadratically towards 0.
pub fn graded_breaks(r: f64, panels: usize) -> Vec<f64> {
    let p = panels.max(1) as f64;
    (0..=panels.max(1)).map(|j| r * (j as f64 / p).powi(2)).collect()
}

fn finite_or_fail<T: Integrand>(v: T) -> Result<T> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::Quadrature("non-finite integrand value".into()))
    }
}

/// Composite Gauss–Legendre estimate of `∫_a^b f`.
pub fn integrate_1d<T: Integrand>(f: impl FnMut(f64) -> T, a: f64, b: f64, spec: &QuadratureSpec) -> Result<T> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    let rule = GaussRule::new(spec.nodes_1d);
    finite_or_fail(rule.integrate_panels(a, b, spec.panels, f))
}

/// Nodes and weights for `∫_0^t (t-s)^e g(s) ds` on `panels` equal panels.
///
/// The factor `(t-s)^e` is folded into the weights; the last panel uses a
/// Gauss–Jacobi rule so that `g` only needs to be smooth.
pub fn endpoint_weighted_nodes(t: f64, e: f64, panels: usize, nodes_1d: usize) -> Result<Vec<(f64, f64)>> {
    if !(t > 0.0) || !(e > -1.0) {
        return Err(Error::InvalidArgument(format!("need t > 0 and e > -1, got t = {t}, e = {e}")));
    }
    let breaks = uniform_breaks(0.0, t, panels);
    let rule = GaussRule::new(nodes_1d);
    let mut out: Vec<(f64, f64)> = rule
        .composite(&breaks[..breaks.len() - 1])
        .into_iter()
        .map(|(s, w)| (s, w * (t - s).powf(e)))
        .collect();
    let s0 = breaks[breaks.len() - 2];
    let half = 0.5 * (t - s0);
    let alpha = FiniteAboveNegOneF64::new(e).ok_or_else(|| Error::InvalidArgument(format!("exponent {e}")))?;
    let zero = FiniteAboveNegOneF64::new(0.0).expect("0 > -1");
    let gj = GaussJacobi::new(NonZeroUsize::new(nodes_1d.max(1)).expect("positive"), alpha, zero);
    for &(x, w) in gj.as_node_weight_pairs() {
        out.push((s0 + half * (1.0 + x), w * half.powf(e + 1.0)));
    }
    Ok(out)
}

/// Nodes for `[0, ∞)` split at `r`: graded panels on `[0, r]` and the map
/// `u = r / s` on the tail. The boolean marks tail nodes.
pub(crate) fn half_line_nodes(rule: &GaussRule, r: f64, panels: usize) -> Vec<(f64, f64, bool)> {
    let mut out: Vec<(f64, f64, bool)> = rule
        .composite(&graded_breaks(r, panels))
        .into_iter()
        .map(|(x, w)| (x, w, false))
        .collect();
    let tail_panels = (panels / 4).max(4);
    for (s, w) in rule.composite(&graded_breaks(1.0, tail_panels)) {
        out.push((r / s, w * r / (s * s), true));
    }
    out
}

/// Result of an integral over `N` with the portion beyond the truncation box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NIntegral<T> {
    pub value: T,
    pub tail: f64,
}

/// `ω_{m-1} ω_{k-1} ∫∫ g(u, v) u^{m-1} v^{k-1} du dv` over `[0,∞)²`.
///
/// The value includes the tails, integrated through the map `u = R/s`;
/// `tail_tolerance` bounds their share relative to `max(1, |value|)` so that
/// a badly sized box is reported rather than silently absorbed.
pub fn integrate_n_biradial<T: Integrand>(
    g: impl Fn(f64, f64) -> T + Sync,
    alg: &HTypeAlgebra,
    spec: &QuadratureSpec,
    tail_tolerance: f64,
) -> Result<NIntegral<T>>
where
    T: Send,
{
    use rayon::prelude::*;
    spec.validate()?;
    let (m, k) = (alg.m(), alg.k());
    let rule = GaussRule::new(spec.nodes_1d);
    let un = half_line_nodes(&rule, spec.truncation_radius_x, spec.panels);
    let vn = half_line_nodes(&rule, spec.truncation_radius_z, spec.panels);
    let (inner, tail) = un
        .par_iter()
        .map(|&(u, wu, tu)| {
            let mut inner = T::default();
            let mut tail = T::default();
            let wu = wu * u.powi(m as i32 - 1);
            for &(v, wv, tv) in &vn {
                let val = g(u, v) * (wu * wv * v.powi(k as i32 - 1));
                if tu || tv {
                    tail += val;
                } else {
                    inner += val;
                }
            }
            (inner, tail)
        })
        .reduce(
            || (T::default(), T::default()),
            |(mut a, mut b), (c, d)| {
                a += c;
                b += d;
                (a, b)
            },
        );
    let scale = sphere_area(m) * sphere_area(k);
    let mut value = inner * scale;
    let tail = tail * scale;
    value += tail;
    let value = finite_or_fail(value)?;
    let tail_mag = tail.magnitude();
    if tail_mag > tail_tolerance * value.magnitude().max(1.0) {
        return Err(Error::TailBound {
            estimate: tail_mag,
            tolerance: tail_tolerance,
        });
    }
    Ok(NIntegral { value, tail: tail_mag })
}

/// `∫_N g(X, Z) dX dZ` for the desk algebra (`m = 2`, `k = 1`) in polar
/// coordinates for `X`, with `theta_nodes` azimuthal points.
pub fn integrate_n_desk<T: Integrand + Send>(
    g: impl Fn(&[f64], &[f64]) -> T + Sync,
    alg: &HTypeAlgebra,
    spec: &QuadratureSpec,
    theta_nodes: usize,
    tail_tolerance: f64,
) -> Result<NIntegral<T>> {
    use rayon::prelude::*;
    spec.validate()?;
    if alg.m() != 2 || alg.k() != 1 {
        return Err(Error::InvalidArgument(
            "full N-quadrature is limited to the desk algebra (k = 1, m = 2)".into(),
        ));
    }
    let rule = GaussRule::new(spec.nodes_1d);
    let un = half_line_nodes(&rule, spec.truncation_radius_x, spec.panels);
    let half = half_line_nodes(&rule, spec.truncation_radius_z, spec.panels);
    let zn: Vec<(f64, f64, bool)> = half.iter().map(|&(v, w, t)| (-v, w, t)).chain(half.iter().copied()).collect();
    let nt = theta_nodes.max(4);
    let dth = 2.0 * std::f64::consts::PI / nt as f64;
    let (inner, tail) = un
        .par_iter()
        .map(|&(u, wu, tu)| {
            let mut inner = T::default();
            let mut tail = T::default();
            let mut x = [0.0; 2];
            for j in 0..nt {
                let th = dth * j as f64;
                x[0] = u * th.cos();
                x[1] = u * th.sin();
                for &(z, wz, tz) in &zn {
                    let val = g(&x, &[z]) * (u * wu * wz * dth);
                    if tu || tz {
                        tail += val;
                    } else {
                        inner += val;
                    }
                }
            }
            (inner, tail)
        })
        .reduce(
            || (T::default(), T::default()),
            |(mut a, mut b), (c, d)| {
                a += c;
                b += d;
                (a, b)
            },
        );
    let mut value = inner;
    value += tail;
    let value = finite_or_fail(value)?;
    let tail_mag = tail.magnitude();
    if tail_mag > tail_tolerance * value.magnitude().max(1.0) {
        return Err(Error::TailBound {
            estimate: tail_mag,
            tolerance: tail_tolerance,
        });
    }
    Ok(NIntegral { value, tail: tail_mag })
}

/// A rotated product-Gauss rule on `S^{d-1} ⊂ R^d` with weights summing to 1.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

fn random_rotation(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(d);
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        for b in &q {
            let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            q.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    q.concat()
}

impl SphereRule {
    /// Builds a rule with roughly `budget` nodes: Gauss–Jacobi in each polar
    /// angle (exact for the `sin^p` density) and a uniform azimuthal grid,
    /// rotated by a seeded random orthogonal matrix.
    pub fn new(dim: usize, budget: usize, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("sphere dimension {dim} < 2")));
        }
        let q = (((budget.max(8) / 2) as f64).powf(1.0 / (dim - 1) as f64).floor() as usize).max(2);
        Ok(Self::with_order(dim, q, seed))
    }

    /// Product rule with `q` polar nodes per angle and `2q` azimuthal nodes.
    pub fn with_order(dim: usize, q: usize, seed: u64) -> Self {
        let nphi = 2 * q;
        let polar: Vec<Vec<(f64, f64)>> = (0..dim.saturating_sub(2))
            .map(|j| {
                let p = (dim - 2 - j) as f64;
                let e = FiniteAboveNegOneF64::new((p - 1.0) / 2.0).expect("exponent > -1");
                let rule = GaussJacobi::new(NonZeroUsize::new(q).expect("q > 0"), e, e);
                rule.as_node_weight_pairs().to_vec()
            })
            .collect();
        let mut pts: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
        // Angular coordinates as (cos θ_j) lists, expanded lazily below.
        for nodes in &polar {
            let mut next = Vec::with_capacity(pts.len() * nodes.len());
            for (c, w) in &pts {
                for &(x, wx) in nodes {
                    let mut c2 = c.clone();
                    c2.push(x);
                    next.push((c2, w * wx));
                }
            }
            pts = next;
        }
        let rot = random_rotation(dim, seed);
        let mut points = Vec::with_capacity(pts.len() * nphi * dim);
        let mut weights = Vec::with_capacity(pts.len() * nphi);
        let mut omega = vec![0.0; dim];
        for (cosines, w) in &pts {
            for jp in 0..nphi {
                let phi = 2.0 * std::f64::consts::PI * (jp as f64 + 0.5) / nphi as f64;
                let mut s = 1.0;
                for (i, &c) in cosines.iter().enumerate() {
                    omega[i] = s * c;
                    s *= (1.0 - c * c).max(0.0).sqrt();
                }
                omega[dim - 2] = s * phi.cos();
                omega[dim - 1] = s * phi.sin();
                for r in 0..dim {
                    points.push((0..dim).map(|c| rot[r * dim + c] * omega[c]).sum());
                }
                weights.push(*w);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self { dim, points, weights }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.chunks(self.dim).zip(self.weights.iter().copied())
    }

    pub fn average<T: Integrand>(&self, mut f: impl FnMut(&[f64]) -> T) -> T {
        let mut acc = T::default();
        for (p, w) in self.iter() {
            acc += f(p) * w;
        }
        acc
    }
}

/// Uniform average of `f` over `S^{n-1}`.
pub fn sphere_average<T: Integrand>(f: impl FnMut(&[f64]) -> T, n: usize, spec: &QuadratureSpec) -> Result<T> {
    let rule = SphereRule::new(n, spec.sphere_nodes, spec.seed)?;
    finite_or_fail(rule.average(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::build_htype;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn one_dimensional_examples() {
        let s = QuadratureSpec::default();
        assert_abs_diff_eq!(integrate_1d(f64::sin, 0.0, PI, &s).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(integrate_1d(|x: f64| x.powi(10), 0.0, 1.0, &s).unwrap(), 1.0 / 11.0, epsilon = 1e-12);
        let s60 = QuadratureSpec { panels: 60, ..s.clone() };
        let v = integrate_1d(|x: f64| (50.0 * x).cos(), 0.0, 3.0, &s60).unwrap();
        assert_abs_diff_eq!(v, 150f64.sin() / 50.0, epsilon = 1e-10);
        assert!(integrate_1d(|_| f64::NAN, 0.0, 1.0, &s).is_err());
        assert!(integrate_1d(|x| x, 1.0, 0.0, &s).is_err());
    }

    #[test]
    fn doubling_nodes_does_not_increase_error() {
        let exact = 1.0 - (-3f64).exp();
        let mut last = f64::INFINITY;
        for n in [2, 4, 8, 16] {
            let s = QuadratureSpec { nodes_1d: n, panels: 2, ..Default::default() };
            let err = (integrate_1d(|x: f64| (-x).exp(), 0.0, 3.0, &s).unwrap() - exact).abs();
            assert!(err <= last.max(1e-15));
            last = err;
        }
    }

    #[test]
    fn gaussian_over_n() {
        for (k, b) in [(1, 1), (3, 1), (2, 1)] {
            let alg = build_htype(k, b).unwrap();
            let r = integrate_n_biradial(|u, v| (-(u * u + v * v)).exp(), &alg, &QuadratureSpec::default(), 1e-8)
                .unwrap();
            let want = PI.powf((alg.m() + alg.k()) as f64 / 2.0);
            assert!((r.value - want).abs() < 1e-8 * want, "{} vs {}", r.value, want);
        }
    }

    #[test]
    fn tail_violation_is_reported() {
        let alg = build_htype(1, 1).unwrap();
        let g = |u: f64, v: f64| 1.0 / (1.0 + u * u + v * v).powi(2);
        let res = integrate_n_biradial(g, &alg, &QuadratureSpec::default(), 1e-12);
        assert!(matches!(res, Err(Error::TailBound { .. })));
    }

    #[test]
    fn sphere_examples() {
        let s = QuadratureSpec { sphere_nodes: 10_000, ..Default::default() };
        for n in [2, 3, 4, 8] {
            assert_abs_diff_eq!(sphere_average(|_| 3.0, n, &s).unwrap(), 3.0, epsilon = 1e-12);
            let second = sphere_average(|w| w[0] * w[0], n, &s).unwrap();
            assert_abs_diff_eq!(second, 1.0 / n as f64, epsilon = 1e-3);
            assert_abs_diff_eq!(sphere_average(|w| w[0], n, &s).unwrap(), 0.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn sphere_rule_exact_for_low_degree() {
        let rule = SphereRule::with_order(5, 4, 7);
        // E[ω_1^4] on S^4 = 3 / (n(n+2)) with n = 5
        let v = rule.average(|w| w[0].powi(4));
        assert_abs_diff_eq!(v, 3.0 / 35.0, epsilon = 1e-13);
        for p in rule.iter() {
            let nrm: f64 = p.0.iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(nrm, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn sphere_rule_is_deterministic() {
        let a = SphereRule::new(4, 2000, 42).unwrap();
        let b = SphereRule::new(4, 2000, 42).unwrap();
        let f = |w: &[f64]| (w[0] + 2.0 * w[1]).exp();
        assert_eq!(a.average(f).to_bits(), b.average(f).to_bits());
    }
}
