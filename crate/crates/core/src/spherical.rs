//! Spherical functions `φ_λ` by three routes: hypergeometric series,
//! Poisson integral and Koornwinder's cosine-transform formula.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::htype::HTypeAlgebra;
use crate::nagroup::{distance_to_origin, NAPoint};
use crate::poisson::{LnPoisson, SpectralPoint, TAIL_SHARE};
use crate::quad::{integrate_n_biradial, integrate_n_desk, GaussRule, QuadratureSpec};
use crate::special::{ln_gamma, ln_gamma_real, DdComplex};

/// Jacobi parameters `α = (m+k-1)/2`, `β = (k-1)/2`, `ρ = α + β + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(beta > -0.5 && alpha >= beta) {
            return Err(Error::InvalidArgument(format!("need α ≥ β > -1/2, got α = {alpha}, β = {beta}")));
        }
        Ok(Self {
            alpha,
            beta,
            rho: alpha + beta + 1.0,
        })
    }

    pub fn from_algebra(alg: &HTypeAlgebra) -> Self {
        Self::from_dims(alg.m(), alg.k()).expect("H-type dimensions are admissible")
    }

    /// Parameters for `v`-dimension `m` and center dimension `k`.
    pub fn from_dims(m: usize, k: usize) -> Result<Self> {
        Self::new((m + k) as f64 / 2.0 - 0.5, (k as f64 - 1.0) / 2.0)
    }

    /// Parameters for total dimension `n = m + k + 1`.
    pub fn from_nk(n: usize, k: usize) -> Result<Self> {
        if n < k + 2 {
            return Err(Error::InvalidArgument(format!("n = {n} too small for k = {k}")));
        }
        Self::from_dims(n - k - 1, k)
    }

    /// Center dimension `k = 2β + 1`.
    pub fn k(&self) -> f64 {
        2.0 * self.beta + 1.0
    }
}

const MAX_TERMS: usize = 10_000;

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re.fract() == 0.0
}

/// `₂F₁(a, b; c; z)` for real `|z| < 1`, summed in double-double arithmetic.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    gauss_2f1_terms(a, b, c, z, MAX_TERMS)
}

pub(crate) fn gauss_2f1_terms(a: Complex64, b: Complex64, c: Complex64, z: f64, max_terms: usize) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a nonpositive integer")));
    }
    if !(z.abs() < 1.0) {
        return Err(Error::Domain(format!("|z| = {} ≥ 1", z.abs())));
    }
    let (a, b, c) = (DdComplex::from_c64(a), DdComplex::from_c64(b), DdComplex::from_c64(c));
    let zd = TwoFloat::from(z);
    let one = DdComplex::from_c64(Complex64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    for j in 0..max_terms {
        let jd = DdComplex::from_c64(Complex64::new(j as f64, 0.0));
        let num = (a + jd) * (b + jd);
        let den = (c + jd).scale(TwoFloat::from((j + 1) as f64));
        term = (num.div(den)).scale(zd) * term;
        if term.norm1() == 0.0 {
            return Ok(sum.to_c64());
        }
        sum = sum + term;
        let ratio = num.div(den).norm1() * z.abs();
        let tail = if ratio < 1.0 { term.norm1() * ratio / (1.0 - ratio) } else { f64::INFINITY };
        if j > 2 && tail <= 1e-17 * sum.norm1() {
            return Ok(sum.to_c64());
        }
    }
    let s = sum.to_c64();
    Err(Error::NonConvergence {
        iterations: max_terms,
        partial_re: s.re,
        partial_im: s.im,
    })
}

/// Real `₂F₁` with positive `c` for `0 ≤ z ≤ 1/2`, in plain double precision.
pub(crate) fn hyp2f1_small(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..200 {
        let j = j as f64;
        term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Jacobi function `φ^{(α,β)}_μ(s)` through the Pfaff-transformed series in
/// `tanh² s`.
pub fn jacobi_phi(params: &JacobiParams, mu: Complex64, s: f64) -> Result<Complex64> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("s = {s} must be nonnegative")));
    }
    if s == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let i = Complex64::i();
    let rho = params.rho;
    let a = 0.5 * (rho - i * mu);
    let b = params.alpha + 1.0 - 0.5 * (rho + i * mu);
    let c = Complex64::new(params.alpha + 1.0, 0.0);
    let th = s.tanh();
    let f = gauss_2f1(a, b, c, th * th)?;
    let lncosh = ln_cosh(s);
    Ok((-(rho - i * mu) * lncosh).exp() * f)
}

fn ln_cosh(s: f64) -> f64 {
    let s = s.abs();
    s + (-2.0 * s).exp().ln_1p() - std::f64::consts::LN_2
}

fn ln_sinh(s: f64) -> f64 {
    s + (-(-2.0 * s).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Threshold on `|μ| tanh s` above which the series loses too many digits.
const SERIES_PHASE_LIMIT: f64 = 17.5;
/// Largest Jacobi radius evaluated by the series.
const SERIES_RADIUS_LIMIT: f64 = 3.0;

/// Jacobi function, choosing the series or the Koornwinder integral.
pub fn jacobi_phi_auto(params: &JacobiParams, mu: Complex64, s: f64, nodes_1d: usize) -> Result<Complex64> {
    if s <= SERIES_RADIUS_LIMIT && mu.norm() * s.tanh() <= SERIES_PHASE_LIMIT {
        jacobi_phi(params, mu, s)
    } else {
        Ok(KoornwinderKernel::new(params, s, mu.norm(), nodes_1d)?.eval(mu))
    }
}

/// `φ_λ(r) = φ^{(α,β)}_{2λ}(r/2)`.
pub fn spherical_phi(alg: &HTypeAlgebra, lambda: SpectralPoint, r: f64) -> Result<Complex64> {
    spherical_phi_params(&JacobiParams::from_algebra(alg), lambda, r)
}

pub fn spherical_phi_params(params: &JacobiParams, lambda: SpectralPoint, r: f64) -> Result<Complex64> {
    jacobi_phi_auto(params, 2.0 * lambda, 0.5 * r, 16)
}

/// Precomputed Koornwinder quadrature at a fixed Jacobi radius `τ`:
/// `φ^{(α,β)}_μ(τ) = Σ w_i cos(μ s_i)`.
#[derive(Debug, Clone)]
pub struct KoornwinderKernel {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `ln` of the prefactor dividing the raw integral.
    ln_prefactor: f64,
}

impl KoornwinderKernel {
    /// Kernel resolving frequencies up to `mu_max`.
    pub fn new(params: &JacobiParams, tau: f64, mu_max: f64, nodes_1d: usize) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::Domain("Koornwinder formula needs τ > 0".into()));
        }
        let (alpha, beta) = (params.alpha, params.beta);
        let ln_prefactor = ln_gamma_real(alpha + 0.5) + ln_gamma_real(0.5)
            - (alpha + 0.5) * std::f64::consts::LN_2
            - ln_gamma_real(alpha + 1.0)
            + 2.0 * alpha * ln_sinh(tau)
            + (beta + 0.5) * ln_cosh(tau);
        let period_count = mu_max * tau / (2.0 * std::f64::consts::PI);
        let panels = ((10.0 * period_count).ceil() as usize).max(32);
        let rule = GaussRule::new(nodes_1d);
        let ch = tau.cosh();
        let mut nodes = Vec::with_capacity(panels * rule.len());
        let mut weights = Vec::with_capacity(panels * rule.len());
        for (w, ww) in rule.composite(&crate::quad::uniform_breaks(0.0, 1.0, panels)) {
            let s = tau * (1.0 - w * w);
            // cosh τ - cosh s = 2 sinh((τ+s)/2) sinh((τ-s)/2)
            let ln_diff = std::f64::consts::LN_2 + ln_sinh(0.5 * (tau + s)) + ln_sinh(0.5 * tau * w * w);
            let hyp = hyp2f1_small(beta + 0.5, 0.5 - beta, alpha + 0.5, ln_diff.exp() / (2.0 * ch));
            let lw = (alpha - 0.5) * ln_diff - ln_prefactor;
            nodes.push(s);
            weights.push(ww * 2.0 * tau * w * hyp * lw.exp());
        }
        Ok(Self {
            nodes,
            weights,
            ln_prefactor,
        })
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        crate::special::cosine_sum(&self.nodes, &self.weights, mu)
    }

    pub fn eval_real(&self, mu: f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&s, &w)| (mu * s).cos() * w).sum()
    }

    /// The prefactor that turns `φ` back into the raw cosine integral.
    pub fn prefactor(&self) -> f64 {
        self.ln_prefactor.exp()
    }
}

/// `φ_λ(r)` from the Koornwinder formula in the Jacobi variables `(2λ, r/2)`.
pub fn koornwinder_phi(alg: &HTypeAlgebra, lambda: SpectralPoint, r: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain("Koornwinder formula is 0/0 at r = 0".into()));
    }
    let params = JacobiParams::from_algebra(alg);
    let mu = 2.0 * lambda;
    Ok(KoornwinderKernel::new(&params, 0.5 * r, mu.norm(), spec.nodes_1d)?.eval(mu))
}

/// `φ_λ(y) = ∫_N 𝒫_λ(e, n) 𝒫_{-λ}(y, n) dn`.
///
/// Points on the `A`-axis reduce to a bi-radial integral for any algebra;
/// other points need the desk algebra.
pub fn spherical_phi_integral(
    alg: &HTypeAlgebra,
    lambda: SpectralPoint,
    y: &NAPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let q = alg.q();
    let i = Complex64::i();
    let e1 = 0.5 - i * lambda / q;
    let e2 = 0.5 + i * lambda / q;
    let on_axis = y.x.iter().chain(&y.z).all(|&v| v == 0.0);
    let spec = spec.clone().with_poisson_truncation(distance_to_origin(alg, y)?);
    if on_axis {
        let a = y.a();
        let lp = LnPoisson::new(alg);
        let g = |u: f64, v: f64| -> Complex64 {
            let (x2, z2) = (u * u, v * v);
            let l1 = lp.eval(1.0, x2, z2);
            let la = lp.eval(a, x2, z2);
            (e1 * l1 + e2 * la).exp()
        };
        return Ok(integrate_n_biradial(g, alg, &spec, TAIL_SHARE)?.value);
    }
    if alg.m() != 2 || alg.k() != 1 {
        return Err(Error::InvalidArgument(
            "off-axis integral representation is limited to the desk algebra (k = 1, m = 2)".into(),
        ));
    }
    // Desk algebra: [X, Y] = x1 y2 - x2 y1 and n^{-1} n_y = (X_y - X, Z_y - Z - [X, X_y]/2).
    let (xy, zy, a) = ([y.x[0], y.x[1]], y.z[0], y.a());
    let lp = LnPoisson::new(alg);
    let g = |x: &[f64], z: &[f64]| -> Complex64 {
        let l1 = lp.eval(1.0, x[0] * x[0] + x[1] * x[1], z[0] * z[0]);
        let (dx0, dx1) = (xy[0] - x[0], xy[1] - x[1]);
        let dz = zy - z[0] - 0.5 * (x[0] * xy[1] - x[1] * xy[0]);
        let la = lp.eval(a, dx0 * dx0 + dx1 * dx1, dz * dz);
        (e1 * l1 + e2 * la).exp()
    };
    let spec = QuadratureSpec {
        panels: spec.panels.min(16),
        ..spec
    };
    Ok(integrate_n_desk(g, alg, &spec, 48, TAIL_SHARE)?.value)
}

/// Default stencil step for [`eigen_ode_residual`].
pub const ODE_STEP: f64 = 2e-3;

/// Max over `r_grid` of `|φ'' + b(r)φ' + (λ² + Q²/4)φ|` by 5-point stencils
/// of step `h`, with `b(r) = ((m+k)/2) coth(r/2) + (k/2) tanh(r/2)`.
pub fn eigen_ode_residual(alg: &HTypeAlgebra, lambda: SpectralPoint, r_grid: &[f64], h: f64) -> Result<f64> {
    if r_grid.iter().any(|&r| r < 0.05) {
        return Err(Error::Domain("grid points below r = 0.05 hit the coth singularity".into()));
    }
    if !(h > 0.0 && h <= 0.05) {
        return Err(Error::InvalidArgument(format!("stencil step {h} outside (0, 0.05]")));
    }
    let (m, k) = (alg.m() as f64, alg.k() as f64);
    let q = alg.q();
    let ev = lambda * lambda + q * q / 4.0;
    let mut worst = 0.0f64;
    for &r in r_grid {
        let f = |d: f64| spherical_phi(alg, lambda, r + d);
        let (fm2, fm1, f0, fp1, fp2) = (f(-2.0 * h)?, f(-h)?, f(0.0)?, f(h)?, f(2.0 * h)?);
        let d1 = (fm2 - fp2 + 8.0 * (fp1 - fm1)) / (12.0 * h);
        let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        let b = 0.5 * (m + k) / (0.5 * r).tanh() + 0.5 * k * (0.5 * r).tanh();
        worst = worst.max((d2 + b * d1 + ev * f0).norm());
    }
    Ok(worst)
}

/// `ln |c_{α,β}(μ)|` with
/// `c(μ) = 2^{ρ-iμ} Γ(α+1) Γ(iμ) / (Γ((ρ+iμ)/2) Γ((α-β+1+iμ)/2))`.
pub fn ln_abs_c_function(params: &JacobiParams, mu: f64) -> f64 {
    let i = Complex64::i();
    let (alpha, beta, rho) = (params.alpha, params.beta, params.rho);
    rho * std::f64::consts::LN_2 + ln_gamma_real(alpha + 1.0) + ln_gamma(i * mu).re
        - ln_gamma(0.5 * (rho + i * mu)).re
        - ln_gamma(0.5 * (alpha - beta + 1.0 + i * mu)).re
}

/// Plancherel density `|c_{α,β}(2λ)|^{-2}`.
pub fn plancherel_density(params: &JacobiParams, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    (-2.0 * ln_abs_c_function(params, 2.0 * lambda.abs())).exp()
}
