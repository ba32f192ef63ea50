//! Sphere means `M_t`, the oscillatory integrals `Φ_k`, `Ĩ_ν`, `I_ν` and
//! half-integer Bessel functions.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::htype::HTypeAlgebra;
use crate::nagroup::{multiply_unchecked, sphere_point, NAPoint};
use crate::quad::{endpoint_weighted_nodes, uniform_breaks, GaussRule, QuadratureSpec, SphereRule};
use crate::special::{binomial, factorial, gamma_real, pochhammer};
use crate::spherical::{hyp2f1_small, JacobiParams};

/// `M_t f(x)`: the average of `f(x·y)` over `y ∈ S_t`.
pub fn mean_value(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    x: &NAPoint,
    t: f64,
    sphere: &SphereRule,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("sphere radius {t} must be positive")));
    }
    crate::error::check_len(alg.n(), sphere.dim())?;
    let mut acc = 0.0;
    for (omega, w) in sphere.iter() {
        let y = sphere_point(alg, t, omega)?;
        acc += w * f(&multiply_unchecked(alg, x, &y));
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::Quadrature("non-finite sphere mean".into()))
    }
}

/// Reduced rule for sphere means of radial functions about axis points.
///
/// For `x` on the `A`-axis and radial `f`, `f(x·y)` with `y ∈ S_t` depends only on
/// the `A`-component `a` of the direction and on the split angle `ψ` between
/// its `V` and `Z` parts, so the mean is a two-dimensional Gauss–Jacobi sum in
/// `a` and `s = cos 2ψ`.
#[derive(Debug, Clone)]
pub struct ZonalSphereRule {
    dirs: Vec<(Vec<f64>, f64)>,
}

impl ZonalSphereRule {
    pub fn new(alg: &HTypeAlgebra, a_nodes: usize, s_nodes: usize) -> Result<Self> {
        let (m, k) = (alg.m(), alg.k());
        let n = m + k + 1;
        let gj = |q: usize, alpha: f64, beta: f64| -> Result<Vec<(f64, f64)>> {
            let q = std::num::NonZeroUsize::new(q)
                .ok_or_else(|| Error::InvalidArgument("zonal rule needs at least one node".into()))?;
            let e = |v: f64| {
                gauss_quad::FiniteAboveNegOneF64::new(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("Jacobi exponent {v}")))
            };
            Ok(gauss_quad::GaussJacobi::new(q, e(alpha)?, e(beta)?).as_node_weight_pairs().to_vec())
        };
        let ea = 0.5 * (n as f64 - 3.0);
        let a_rule = gj(a_nodes, ea, ea)?;
        let s_rule = gj(s_nodes, 0.5 * k as f64 - 1.0, 0.5 * m as f64 - 1.0)?;
        let signs: &[f64] = if k == 1 { &[1.0, -1.0] } else { &[1.0] };
        let mut dirs = Vec::with_capacity(a_rule.len() * s_rule.len() * signs.len());
        for &(a, wa) in &a_rule {
            let rad = (1.0 - a * a).max(0.0).sqrt();
            for &(s, ws) in &s_rule {
                let (cv, sz) = ((0.5 * (1.0 + s)).max(0.0).sqrt(), (0.5 * (1.0 - s)).max(0.0).sqrt());
                for &sg in signs {
                    let mut w = vec![0.0; n];
                    w[0] = rad * cv;
                    w[m] = sg * rad * sz;
                    w[n - 1] = a;
                    dirs.push((w, wa * ws));
                }
            }
        }
        let total: f64 = dirs.iter().map(|d| d.1).sum();
        dirs.iter_mut().for_each(|d| d.1 /= total);
        Ok(Self { dirs })
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

/// `M_t f` at the axis point at distance `r` from `e`, for radial `f`
/// given by its profile.
pub fn radial_mean_value(
    alg: &HTypeAlgebra,
    profile: &dyn Fn(f64) -> f64,
    r: f64,
    t: f64,
    rule: &ZonalSphereRule,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("sphere radius {t} must be positive")));
    }
    let x = NAPoint::on_axis(alg, r.exp())?;
    let mut acc = 0.0;
    for (omega, w) in &rule.dirs {
        let y = sphere_point(alg, t, omega)?;
        acc += w * profile(crate::nagroup::distance_to_origin(alg, &multiply_unchecked(alg, &x, &y))?);
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::Quadrature("non-finite sphere mean".into()))
    }
}

/// Panel count for cosine integrals on `[0, t]` up to frequency `lambda_max`.
pub fn oscillation_panel_count(lambda_max: f64, t: f64) -> usize {
    ((10.0 * lambda_max * t / (2.0 * PI)).ceil() as usize).max(32)
}

/// `sinh(x)/x`.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// `(cosh t - cosh s)/(t - s)` without cancellation.
fn cosh_gap_ratio(t: f64, s: f64) -> f64 {
    (0.5 * (t + s)).sinh() * sinhc(0.5 * (t - s))
}

/// Cosine quadrature `∫_0^t cos(λs) w(s) ds` with precomputed nodes.
#[derive(Debug, Clone)]
pub struct CosineRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lambda_max: f64,
}

impl CosineRule {
    /// Folds `(t-s)^e g(s)` into the weights.
    fn with_endpoint(t: f64, e: f64, lambda_max: f64, nodes_1d: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let panels = oscillation_panel_count(lambda_max, t);
        let (nodes, weights) = endpoint_weighted_nodes(t, e, panels, nodes_1d)?
            .into_iter()
            .map(|(s, w)| (s, w * g(s)))
            .unzip();
        Ok(Self {
            nodes,
            weights,
            lambda_max,
        })
    }

    /// Rejects frequencies beyond the resolved range.
    fn audit(&self, lambda: Complex64) -> Result<()> {
        if lambda.re.abs() > self.lambda_max * (1.0 + 1e-12) {
            Err(Error::Quadrature(format!(
                "|Re λ| = {} exceeds the resolved frequency {}",
                lambda.re.abs(),
                self.lambda_max
            )))
        } else {
            Ok(())
        }
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        self.audit(lambda)?;
        Ok(crate::special::cosine_sum(&self.nodes, &self.weights, lambda))
    }

    pub fn eval_real(&self, lambda: f64) -> Result<f64> {
        self.audit(Complex64::new(lambda, 0.0))?;
        Ok(self.nodes.iter().zip(&self.weights).map(|(&s, &w)| (lambda * s).cos() * w).sum())
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }
}

/// `Φ_k` at Jacobi radius `t` as a reusable rule:
/// `∫_0^t cos(λs) (cosh t - cosh s)^{α-1/2} F(β+1/2, 1/2-β; α+1/2; (cosh t - cosh s)/(2 cosh t)) ds`.
pub fn phi_k_rule(params: &JacobiParams, t: f64, lambda_max: f64, spec: &QuadratureSpec) -> Result<CosineRule> {
    spec.validate()?;
    let (a, b) = (params.alpha, params.beta);
    let e = a - 0.5;
    let ch = t.cosh();
    CosineRule::with_endpoint(t, e, lambda_max, spec.nodes_1d, |s| {
        let ratio = cosh_gap_ratio(t, s);
        let gap = ratio * (t - s);
        ratio.powf(e) * hyp2f1_small(b + 0.5, 0.5 - b, a + 0.5, gap / (2.0 * ch))
    })
}

/// `Φ_k(λ)` by oscillation-resolved panel quadrature.
pub fn phi_k_integral(params: &JacobiParams, lambda: Complex64, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    phi_k_rule(params, t, lambda.re.abs(), spec)?.eval(lambda)
}

/// `c_{ℓ,M} = (-1)^ℓ binom(M, ℓ) (1+M)_ℓ / (1+N)_ℓ`.
pub fn c_coefficient(l: u32, big_m: u32, big_n: f64) -> f64 {
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    sign * binomial(big_m, l) * pochhammer(1.0 + big_m as f64, l) / pochhammer(1.0 + big_n, l)
}

/// `N = α - 1/2` and `M = β - 1/2` when `k` is even and `n` odd.
fn integer_orders(params: &JacobiParams) -> Result<(u32, u32)> {
    let (n_ord, m_ord) = (params.alpha - 0.5, params.beta - 0.5);
    let is_nat = |x: f64| x >= 0.0 && x.fract() == 0.0;
    if !is_nat(m_ord) || params.k() < 4.0 {
        return Err(Error::InvalidArgument(format!(
            "polynomial form needs even k ≥ 4, got k = {}",
            params.k()
        )));
    }
    if !is_nat(n_ord) {
        return Err(Error::InvalidArgument(format!("polynomial form needs integer N, got {n_ord}")));
    }
    Ok((n_ord as u32, m_ord as u32))
}

/// `Φ_k(λ) = Σ_{ℓ=0}^{M} 2^{-ℓ} c_{ℓ,M} (cosh t)^{-ℓ} Ĩ_{N+ℓ}(λ)` for even `k ≥ 4`.
pub fn phi_k_polynomial_form(params: &JacobiParams, lambda: Complex64, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let (big_n, big_m) = integer_orders(params)?;
    let ch = t.cosh();
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..=big_m {
        let c = c_coefficient(l, big_m, big_n as f64) * (2.0 * ch).powi(-(l as i32));
        acc += c * i_tilde_rule(t, big_n + l, lambda.re.abs(), spec)?.eval(lambda)?;
    }
    Ok(acc)
}

fn i_tilde_rule(t: f64, nu: u32, lambda_max: f64, spec: &QuadratureSpec) -> Result<CosineRule> {
    spec.validate()?;
    let e = nu as f64;
    CosineRule::with_endpoint(t, e, lambda_max, spec.nodes_1d, |s| cosh_gap_ratio(t, s).powi(nu as i32))
}

/// `Ĩ_ν(λ) = ∫_0^t cos(λs) (cosh t - cosh s)^ν ds` by panel quadrature.
pub fn i_tilde_nu(lambda: f64, t: f64, nu: u32, spec: &QuadratureSpec) -> Result<f64> {
    i_tilde_rule(t, nu, lambda.abs(), spec)?.eval_real(lambda)
}

/// Leading term `ν! (sinh t)^ν λ^{-ν-1} sin(λt - νπ/2)` of `Ĩ_ν`.
pub fn i_tilde_leading(lambda: f64, t: f64, nu: u32) -> f64 {
    factorial(nu) * t.sinh().powi(nu as i32) * lambda.abs().powi(-(nu as i32) - 1)
        * (lambda.abs() * t - nu as f64 * FRAC_PI_2).sin()
}

/// `Ĩ_ν` through repeated integration by parts:
///
/// `Ĩ_ν(λ) = Re Σ_{j=ν}^{J-1} (-1)^j e^{iλt} h^{(j)}(t) (iλ)^{-j-1}
///          + Re (-1)^J (iλ)^{-J} ∫_0^t e^{iλs} h^{(J)}(s) ds`
///
/// with `h(s) = (cosh t - cosh s)^ν`. The terms at `s = 0` are imaginary
/// because `h` is even. The identity is exact; the remainder integral is
/// `O(λ^{-J-1})` so quadrature noise is suppressed by `λ^{-J}`.
#[derive(Debug, Clone)]
pub struct ByPartsIntegrator {
    t: f64,
    order: u32,
    /// `h^{(j)}(t)` for `j < order`.
    boundary: Vec<f64>,
    nodes: Vec<f64>,
    /// Quadrature weight times `h^{(J)}`.
    weights: Vec<f64>,
    lambda_max: f64,
}

impl ByPartsIntegrator {
    pub fn new(t: f64, nu: u32, extra_orders: u32, lambda_max: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
        }
        let order = nu + extra_orders.max(1);
        let boundary = taylor_at_t(t, nu, order as usize);
        let expo = exponential_sum(t, nu);
        let rule = GaussRule::new(16);
        let panels = oscillation_panel_count(lambda_max, t);
        let (nodes, weights) = rule
            .composite(&uniform_breaks(0.0, t, panels))
            .into_iter()
            .map(|(s, w)| {
                let d: f64 = expo.iter().map(|&(p, c)| c * p.powi(order as i32) * (p * s).exp()).sum();
                (s, w * d)
            })
            .unzip();
        Ok(Self {
            t,
            order,
            boundary,
            nodes,
            weights,
            lambda_max,
        })
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let l = lambda.abs();
        if !(l > 0.0) || l > self.lambda_max * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "by-parts route needs 0 < |λ| ≤ {}, got {lambda}",
                self.lambda_max
            )));
        }
        let il = Complex64::new(0.0, l);
        let phase = Complex64::from_polar(1.0, l * self.t);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = il; // (iλ)^{j+1}
        for (j, &h) in self.boundary.iter().enumerate() {
            if h != 0.0 {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += phase * (sign * h) / pow;
            }
            pow *= il;
        }
        let rem: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| Complex64::from_polar(w, l * s))
            .sum();
        let sign = if self.order % 2 == 0 { 1.0 } else { -1.0 };
        acc += rem * sign / il.powu(self.order);
        Ok(acc.re)
    }
}

/// `h^{(j)}(t)` for `h(s) = (cosh t - cosh s)^ν`, `j < jmax`, from the Taylor
/// series of `cosh t - cosh(t+u) = -Σ_{q≥1} c_q u^q/q!`.
fn taylor_at_t(t: f64, nu: u32, jmax: usize) -> Vec<f64> {
    let (sh, ch) = (t.sinh(), t.cosh());
    let mut g = vec![0.0; jmax];
    let mut fact = 1.0;
    for (q, gq) in g.iter_mut().enumerate().skip(1) {
        fact *= q as f64;
        *gq = -(if q % 2 == 1 { sh } else { ch }) / fact;
    }
    let mut h = vec![0.0; jmax];
    if jmax > 0 {
        h[0] = 1.0;
    }
    for _ in 0..nu {
        let mut next = vec![0.0; jmax];
        for (i, &hi) in h.iter().enumerate() {
            if hi == 0.0 {
                continue;
            }
            for (q, &gq) in g.iter().enumerate().take(jmax - i) {
                next[i + q] += hi * gq;
            }
        }
        h = next;
    }
    let mut fact = 1.0;
    for (j, hj) in h.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        *hj *= fact;
    }
    h
}

/// `(cosh t - cosh s)^ν = Σ_p c_p e^{ps}` as `(p, c_p)` pairs.
fn exponential_sum(t: f64, nu: u32) -> Vec<(f64, f64)> {
    let ch = t.cosh();
    let n = nu as i32;
    let mut coeffs = vec![0.0; (2 * n + 1) as usize];
    for i in 0..=nu {
        let outer = binomial(nu, i) * ch.powi(n - i as i32) * if i % 2 == 0 { 1.0 } else { -1.0 };
        let scale = 0.5f64.powi(i as i32);
        for q in 0..=i {
            let p = i as i32 - 2 * q as i32;
            coeffs[(p + n) as usize] += outer * scale * binomial(i, q);
        }
    }
    coeffs
        .into_iter()
        .enumerate()
        .map(|(j, c)| ((j as i32 - n) as f64, c))
        .filter(|&(_, c)| c != 0.0)
        .collect()
}

/// `J_{ν+1/2}(z)` by the terminating Hankel sums for `z ≥ ν` and the power
/// series below.
pub fn bessel_half_integer(nu: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("J_{{ν+1/2}}(z) needs z > 0, got {z}")));
    }
    if z < nu as f64 {
        return Ok(bessel_series(nu as f64 + 0.5, z));
    }
    let chi = z - nu as f64 * FRAC_PI_2;
    let (mut ps, mut qs) = (0.0, 0.0);
    let two_z = 2.0 * z;
    let mut k = 0u32;
    while 2 * k <= nu {
        let term = factorial(nu + 2 * k) / (factorial(2 * k) * factorial(nu - 2 * k)) / two_z.powi(2 * k as i32);
        ps += if k % 2 == 0 { term } else { -term };
        k += 1;
    }
    let mut k = 0u32;
    while 2 * k < nu {
        let term =
            factorial(nu + 2 * k + 1) / (factorial(2 * k + 1) * factorial(nu - 2 * k - 1)) / two_z.powi(2 * k as i32 + 1);
        qs += if k % 2 == 0 { term } else { -term };
        k += 1;
    }
    Ok((2.0 / (PI * z)).sqrt() * (chi.sin() * ps + chi.cos() * qs))
}

fn bessel_series(order: f64, z: f64) -> f64 {
    let h = 0.5 * z;
    let mut term = h.powf(order) / gamma_real(order + 1.0);
    let mut sum = term;
    for m in 1..400 {
        let m = m as f64;
        term *= -h * h / (m * (m + order));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `I_ν(λ) = √π 2^{ν-1/2} t^{2ν+1} (λt)^{-ν-1/2} Γ(ν+1) J_{ν+1/2}(λt)`,
/// the closed form of `∫_0^t cos(λs)(t²-s²)^ν ds`.
pub fn i_nu_exact(lambda: f64, t: f64, nu: u32) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
    }
    let l = lambda.abs();
    let v = nu as f64;
    if l == 0.0 {
        return Ok(t.powi(2 * nu as i32 + 1) * PI.sqrt() * gamma_real(v + 1.0) / (2.0 * gamma_real(v + 1.5)));
    }
    let z = l * t;
    Ok(PI.sqrt() * 2f64.powf(v - 0.5) * t.powi(2 * nu as i32 + 1) * z.powf(-v - 0.5) * factorial(nu)
        * bessel_half_integer(nu, z)?)
}

/// `∫_0^t cos(λs)(t²-s²)^ν ds` by panel quadrature.
pub fn i_nu_quadrature(lambda: f64, t: f64, nu: u32, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    CosineRule::with_endpoint(t, nu as f64, lambda.abs(), spec.nodes_1d, |s| (t + s).powi(nu as i32))?
        .eval_real(lambda)
}

/// `a_{0,ν} = (sinh t/(2t))^ν`.
pub fn a0_coefficient(t: f64, nu: u32) -> f64 {
    (t.sinh() / (2.0 * t)).powi(nu as i32)
}

/// Slope of `ln max|v|` against `ln λ`, with maxima taken over consecutive
/// windows of the grid.
pub fn fit_decay_slope(lambdas: &[f64], values: &[f64], windows: usize) -> Result<f64> {
    crate::error::check_len(lambdas.len(), values.len())?;
    let windows = windows.max(2);
    if lambdas.len() < windows {
        return Err(Error::InvalidArgument("fewer samples than windows".into()));
    }
    let per = lambdas.len() / windows;
    let pts: Vec<(f64, f64)> = (0..windows)
        .map(|w| {
            let lo = w * per;
            let hi = if w + 1 == windows { lambdas.len() } else { lo + per };
            let (mut best, mut at) = (0.0f64, lambdas[lo]);
            for i in lo..hi {
                if values[i].abs() > best {
                    best = values[i].abs();
                    at = lambdas[i];
                }
            }
            (at.ln(), best.max(f64::MIN_POSITIVE).ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    Ok(num / den)
}

/// Log-spaced windows, each one oscillation period wide, sampled densely.
fn window_grid(lambda_min: f64, lambda_max: f64, t: f64, windows: usize, per_window: usize) -> Vec<f64> {
    let period = 2.0 * PI / t;
    let (l0, l1) = (lambda_min.ln(), (lambda_max - period).max(lambda_min).ln());
    let mut out = Vec::with_capacity(windows * per_window);
    for w in 0..windows {
        let start = (l0 + (l1 - l0) * w as f64 / (windows - 1).max(1) as f64).exp();
        for j in 0..per_window {
            out.push(start + period * j as f64 / per_window as f64);
        }
    }
    out
}

const FIT_WINDOWS: usize = 24;
const SAMPLES_PER_WINDOW: usize = 48;

/// `Ĩ_ν` against its leading term on `[λ_min, λ_max]`.
#[derive(Debug, Clone, Serialize)]
pub struct OscillatoryIntegralReport {
    pub nu: u32,
    pub t: f64,
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub leading: Vec<f64>,
    /// `(Ĩ_ν - leading)·λ^{ν+3/2}`.
    pub remainder_scaled: Vec<f64>,
    /// Fitted exponent of `|Ĩ_ν - leading|`.
    pub fitted_slope: f64,
    /// The exponent `-(ν+3/2)` of the stated remainder bound.
    pub stated_slope: f64,
}

pub fn oscillatory_report(nu: u32, t: f64, lambda_min: f64, lambda_max: f64) -> Result<OscillatoryIntegralReport> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err(Error::InvalidArgument(format!("bad λ range [{lambda_min}, {lambda_max}]")));
    }
    let grid = window_grid(lambda_min, lambda_max, t, FIT_WINDOWS, SAMPLES_PER_WINDOW);
    let integ = ByPartsIntegrator::new(t, nu, 4, lambda_max)?;
    let values = grid.iter().map(|&l| integ.eval(l)).collect::<Result<Vec<_>>>()?;
    let leading: Vec<f64> = grid.iter().map(|&l| i_tilde_leading(l, t, nu)).collect();
    let rem: Vec<f64> = values.iter().zip(&leading).map(|(v, l)| v - l).collect();
    let fitted_slope = fit_decay_slope(&grid, &rem, FIT_WINDOWS)?;
    let remainder_scaled = grid.iter().zip(&rem).map(|(&l, r)| r * l.powf(nu as f64 + 1.5)).collect();
    Ok(OscillatoryIntegralReport {
        nu,
        t,
        lambda_grid: grid,
        values,
        leading,
        remainder_scaled,
        fitted_slope,
        stated_slope: -(nu as f64 + 1.5),
    })
}

/// Result of splitting `(cosh t - cosh s)^ν = (t²-s²)^ν q(s)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TaylorSplitReport {
    pub nu: u32,
    pub t: f64,
    /// `q(t)` extrapolated from `s → t`.
    pub a0_fitted: f64,
    pub a0_closed_form: f64,
    /// `q(0) = ((cosh t - 1)/t²)^ν`.
    pub q_at_zero: f64,
    /// Fitted exponent of `|Ĩ_ν - a_{0,ν} I_ν|` on `[50, 400]`.
    pub remainder_slope: f64,
}

/// Checks the constant term of the split and the decay of `Ĩ_ν - a_{0,ν} I_ν`.
pub fn taylor_split_check(t: f64, nu: u32) -> Result<TaylorSplitReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
    }
    let q = |s: f64| -> f64 { ((0.5 * (t + s)).sinh() / (t + s) * sinhc(0.5 * (t - s))).powi(nu as i32) };
    // Neville extrapolation of q(t - δ) to δ = 0.
    let deltas: Vec<f64> = (0..6).map(|j| 0.05 * t * 0.5f64.powi(j)).collect();
    let mut tab: Vec<f64> = deltas.iter().map(|&d| q(t - d)).collect();
    for lvl in 1..tab.len() {
        for i in (lvl..tab.len()).rev() {
            let (di, dj) = (deltas[i], deltas[i - lvl]);
            tab[i] = (dj * tab[i] - di * tab[i - 1]) / (dj - di);
        }
    }
    let a0_fitted = *tab.last().unwrap();
    let a0 = a0_coefficient(t, nu);
    let grid = window_grid(50.0, 400.0, t, FIT_WINDOWS, SAMPLES_PER_WINDOW);
    let integ = ByPartsIntegrator::new(t, nu, 4, 400.0)?;
    let rem = grid
        .iter()
        .map(|&l| Ok(integ.eval(l)? - a0 * i_nu_exact(l, t, nu)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(TaylorSplitReport {
        nu,
        t,
        a0_fitted,
        a0_closed_form: a0,
        q_at_zero: q(0.0),
        remainder_slope: fit_decay_slope(&grid, &rem, FIT_WINDOWS)?,
    })
}
