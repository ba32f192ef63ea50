//! Abel transform, its dual, spherical transforms of radial functions and
//! radial inversion with the Plancherel density.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use splines::{Interpolation, Key, Spline};

use crate::error::{Error, Result};
use crate::htype::HTypeAlgebra;
use crate::nagroup::{ball_bounds, cosh2_half_distance, sphere_mean, NAPoint};
use crate::poisson::SpectralPoint;
use crate::quad::{integrate_n_biradial, uniform_breaks, GaussRule, NIntegral, QuadratureSpec, SphereRule};
use crate::special::sphere_area;
use crate::spherical::{spherical_phi_params, JacobiParams, KoornwinderKernel};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const THETA_NODES: usize = 24;

/// A function of the distance to the origin.
#[derive(Clone)]
pub struct RadialFunction {
    eval: RealFn,
    support_radius: f64,
    compact: bool,
    note: String,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("support_radius", &self.support_radius)
            .field("compact", &self.compact)
            .field("note", &self.note)
            .finish()
    }
}

impl RadialFunction {
    /// Compactly supported function; `eval` is forced to zero beyond `support_radius`.
    pub fn compact(support_radius: f64, note: &str, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("support radius {support_radius} must be positive")));
        }
        Ok(Self {
            eval: Arc::new(eval),
            support_radius,
            compact: true,
            note: note.to_string(),
        })
    }

    /// Function without compact support, integrated up to `effective_radius`.
    pub fn rapidly_decreasing(
        effective_radius: f64,
        note: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let mut f = Self::compact(effective_radius, note, eval)?;
        f.compact = false;
        Ok(f)
    }

    /// `exp(-1/(1-(r/R)²))` on `r < R`.
    pub fn bump(radius: f64) -> Result<Self> {
        Self::compact(radius, "C^∞ bump", move |r| {
            let s = r / radius;
            if s < 1.0 {
                (-1.0 / (1.0 - s * s)).exp()
            } else {
                0.0
            }
        })
    }

    /// `exp(-(r/w)²)`, integrated up to `6w`.
    pub fn gaussian(width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidArgument(format!("gaussian width {width} must be positive")));
        }
        Self::rapidly_decreasing(6.0 * width, "gaussian", move |r| (-(r / width).powi(2)).exp())
    }

    pub fn zero(support_radius: f64) -> Result<Self> {
        Self::compact(support_radius, "zero", |_| 0.0)
    }

    /// Catmull–Rom interpolant of samples on an increasing grid starting at 0.
    ///
    /// The profile is continued evenly through `r = 0` and by zero past the last node.
    pub fn from_samples(r_grid: &[f64], values: &[f64]) -> Result<Self> {
        crate::error::check_len(r_grid.len(), values.len())?;
        if r_grid.len() < 3 || r_grid[0] != 0.0 || r_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "sample grid must start at 0, increase strictly and hold at least 3 nodes".into(),
            ));
        }
        let last = *r_grid.last().unwrap();
        let h_end = last - r_grid[r_grid.len() - 2];
        let mut keys = vec![Key::new(-r_grid[1], values[1], Interpolation::CatmullRom)];
        keys.extend(r_grid.iter().zip(values).map(|(&r, &v)| Key::new(r, v, Interpolation::CatmullRom)));
        keys.push(Key::new(last + h_end, 0.0, Interpolation::CatmullRom));
        let spline = Spline::from_vec(keys);
        let last_value = *values.last().unwrap();
        Self::compact(last, "cubic interpolant", move |r| {
            if r == last {
                return last_value;
            }
            spline.sample(r).unwrap_or(0.0)
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.compact && r > self.support_radius {
            0.0
        } else {
            (self.eval)(r)
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn note(&self) -> &str {
        &self.note
    }
}

/// An even function on the line.
#[derive(Clone)]
pub struct EvenLineFunction {
    eval: RealFn,
    support_radius: f64,
}

impl fmt::Debug for EvenLineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvenLineFunction").field("support_radius", &self.support_radius).finish()
    }
}

impl EvenLineFunction {
    /// Wraps `eval` after checking `eval(t) = eval(-t)` on a sample grid.
    pub fn new(support_radius: f64, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(support_radius > 0.0) {
            return Err(Error::InvalidArgument(format!("support radius {support_radius} must be positive")));
        }
        let span = if support_radius.is_finite() { support_radius } else { 10.0 };
        for j in 1..=64 {
            let t = span * j as f64 / 64.0;
            let (p, m) = (eval(t), eval(-t));
            if (p - m).abs() > 1e-12 * (1.0 + p.abs()) {
                return Err(Error::InvalidArgument(format!("function is not even at t = {t}: {p} vs {m}")));
            }
        }
        Ok(Self {
            eval: Arc::new(eval),
            support_radius,
        })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            eval: Arc::new(move |_| c),
            support_radius: f64::INFINITY,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() > self.support_radius {
            0.0
        } else {
            (self.eval)(t)
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }
}

/// Radial volume density `ω_{n-1} 2^{m+k} sinh^{m+k}(r/2) cosh^k(r/2)`.
pub fn volume_density(alg: &HTypeAlgebra, r: f64) -> f64 {
    let (m, k) = (alg.m() as i32, alg.k() as i32);
    sphere_area(alg.n()) * 2f64.powi(m + k) * (0.5 * r).sinh().powi(m + k) * (0.5 * r).cosh().powi(k)
}

/// Number of panels resolving `freq` over an interval of length `len`.
fn oscillation_panels(freq: f64, len: f64) -> usize {
    (freq * len / PI).ceil() as usize
}

/// `𝒜f(t) = e^{-Qt/2} ∫_N f(n a_t) dn`.
///
/// With `p = 1 + a + |X|²/4 = ρ cos θ`, `|Z| = ρ sin θ` and `ρ = 2√a cosh(r/2)`
/// the `N`-integral collapses to
/// `ω_{m-1} ω_{k-1} 2^{m-1} ∫_{|t|}^R f(r) H(r) ρ √a sinh(r/2) dr` with
/// `H = ∫_0^{θ_max} (ρ cos θ - 1 - a)^{m/2-1} (ρ sin θ)^{k-1} dθ`.
pub fn abel_transform(alg: &HTypeAlgebra, f: &RadialFunction, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let rule = GaussRule::new(spec.nodes_1d);
    let theta_rule = GaussRule::new(THETA_NODES);
    abel_with_rules(alg, f, t, spec.panels, &rule, &theta_rule)
}

fn abel_with_rules(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    t: f64,
    panels: usize,
    rule: &GaussRule,
    theta_rule: &GaussRule,
) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t = {t} is not finite")));
    }
    let big_r = f.support_radius();
    let ta = t.abs();
    if ta >= big_r {
        return Ok(0.0);
    }
    let (m, k) = (alg.m(), alg.k());
    let (pm, pk) = (m as i32 / 2 - 1, k as i32 - 1);
    let a = t.exp();
    let sa = a.sqrt();
    let c0 = 1.0 + a;
    let span = big_r - ta;
    let mut acc = 0.0;
    for (y, w) in rule.composite(&uniform_breaks(0.0, 1.0, panels)) {
        let gap = span * y * y;
        let r = ta + gap;
        let fr = f.eval(r);
        if fr == 0.0 {
            continue;
        }
        let rho = 2.0 * sa * (0.5 * r).cosh();
        // ρ² - c0² = 4a sinh((r+|t|)/2) sinh((r-|t|)/2)
        let s = (4.0 * a * (0.5 * (r + ta)).sinh() * (0.5 * gap).sinh()).sqrt();
        let th_max = s.atan2(c0);
        let h = theta_rule.integrate(0.0, th_max, |th| {
            let base = 2.0 * rho * (0.5 * (th_max + th)).sin() * (0.5 * (th_max - th)).sin();
            base.powi(pm) * (rho * th.sin()).powi(pk)
        });
        acc += w * 2.0 * span * y * fr * h * rho * sa * (0.5 * r).sinh();
    }
    let c = sphere_area(m) * sphere_area(k) * 2f64.powi(m as i32 - 1);
    let v = (-0.5 * alg.q() * t).exp() * c * acc;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature(format!("non-finite Abel transform at t = {t}")))
    }
}

/// `𝒜f(t)` straight from the bi-radial `N`-integral of `f(r(|X|, |Z|, e^t))`.
pub fn abel_transform_biradial(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    t: f64,
    spec: &QuadratureSpec,
    tail_tolerance: f64,
) -> Result<NIntegral<f64>> {
    let big_r = f.support_radius();
    let a = t.exp();
    let bb = ball_bounds(big_r);
    let spec = QuadratureSpec {
        truncation_radius_x: bb.x_max,
        truncation_radius_z: bb.z_max,
        ..spec.clone()
    };
    let g = |u: f64, v: f64| -> f64 {
        let c2 = cosh2_half_distance(&NAPoint {
            x: vec![u],
            z: vec![v],
            t: a.ln(),
        });
        let r = 2.0 * c2.sqrt().max(1.0).acosh();
        if r >= big_r && f.is_compact() {
            0.0
        } else {
            f.eval(r)
        }
    };
    let mut out = integrate_n_biradial(g, alg, &spec, tail_tolerance)?;
    out.value *= (-0.5 * alg.q() * t).exp();
    Ok(out)
}

/// `𝒜f` sampled on Gauss nodes over `[0, R]`, ready for cosine transforms.
#[derive(Debug, Clone)]
pub struct AbelProfile {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    support_radius: f64,
}

impl AbelProfile {
    /// Samples fine enough for Fourier transforms up to `|λ| = lambda_max`.
    pub fn new(alg: &HTypeAlgebra, f: &RadialFunction, lambda_max: f64, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let big_r = f.support_radius();
        let panels = spec.panels.max(oscillation_panels(lambda_max, big_r));
        let rule = GaussRule::new(spec.nodes_1d);
        let theta_rule = GaussRule::new(THETA_NODES);
        let (nodes, weights): (Vec<f64>, Vec<f64>) = rule.composite(&uniform_breaks(0.0, big_r, panels)).into_iter().unzip();
        let values = nodes
            .iter()
            .map(|&t| abel_with_rules(alg, f, t, spec.panels, &rule, &theta_rule))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nodes,
            weights,
            values,
            support_radius: big_r,
        })
    }

    /// `ℱ(𝒜f)(λ) = ∫ 𝒜f(t) e^{-iλt} dt = 2 ∫_0^R 𝒜f(t) cos(λt) dt`.
    pub fn fourier(&self, lambda: SpectralPoint) -> Complex64 {
        let s: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&t, &w), &v)| (lambda * t).cos() * (w * v))
            .sum();
        2.0 * s
    }

    pub fn fourier_real(&self, lambda: f64) -> f64 {
        2.0 * self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&t, &w), &v)| (lambda * t).cos() * w * v)
            .sum::<f64>()
    }

    /// `∫ 𝒜f(t) g(t) dt` for an even `g`.
    pub fn pair(&self, g: &EvenLineFunction) -> f64 {
        2.0 * self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&t, &w), &v)| w * v * g.eval(t))
            .sum::<f64>()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }
}

/// `f̃(λ) = ∫_0^R f(r) φ_λ(r) V(r) dr` with the radial volume density `V`.
pub fn spherical_transform_radial(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    lambda: SpectralPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.validate()?;
    let params = JacobiParams::from_algebra(alg);
    let big_r = f.support_radius();
    let panels = spec.panels.max(oscillation_panels(lambda.re.abs(), big_r));
    let rule = GaussRule::new(spec.nodes_1d);
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, w) in rule.composite(&uniform_breaks(0.0, big_r, panels)) {
        let fr = f.eval(r);
        if fr == 0.0 {
            continue;
        }
        acc += spherical_phi_params(&params, lambda, r)? * (w * fr * volume_density(alg, r));
    }
    if acc.re.is_finite() && acc.im.is_finite() {
        Ok(acc)
    } else {
        Err(Error::Quadrature(format!("non-finite spherical transform at λ = {lambda}")))
    }
}

/// [`spherical_transform_radial`] over a grid of spectral points.
pub fn spherical_transform_grid(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    lambdas: &[SpectralPoint],
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    lambdas
        .par_iter()
        .map(|&l| spherical_transform_radial(alg, f, l, spec))
        .collect()
}

/// `𝒜*F(r) = ∫_{S_r} e^{Q A(y)/2} F(A(y)) dσ_r(y)`.
pub fn dual_abel(alg: &HTypeAlgebra, big_f: &EvenLineFunction, r: f64, sphere: &SphereRule) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("dual Abel transform needs r > 0, got {r}")));
    }
    let q = alg.q();
    sphere_mean(alg, &|y: &NAPoint| (0.5 * q * y.t).exp() * big_f.eval(y.t), r, sphere)
}

/// `∫_{NA} f · g dV` for radial `f` against a radial profile `g`.
pub fn radial_pairing(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    g: impl Fn(f64) -> Result<f64>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let rule = GaussRule::new(spec.nodes_1d);
    let mut acc = 0.0;
    for (r, w) in rule.composite(&uniform_breaks(0.0, f.support_radius(), spec.panels)) {
        let fr = f.eval(r);
        if fr != 0.0 {
            acc += w * fr * g(r)? * volume_density(alg, r);
        }
    }
    Ok(acc)
}

/// Width of the Gauss panels on the spectral line.
const SPECTRAL_PANEL_WIDTH: f64 = 1.5;
const SPECTRAL_NODES: usize = 16;
const KERNEL_NODES: usize = 8;

/// Multiplicative constant and spectral cutoff of the radial inversion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct InversionCalibration {
    pub kappa: f64,
    pub lambda_max: f64,
}

/// Outcome of the round-trip calibration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CalibrationReport {
    pub kappa_fit: f64,
    pub kappa_analytic: f64,
    pub relative_gap: f64,
    /// Relative sup-norm error of the round trip with the fitted constant.
    pub round_trip_error: f64,
}

impl InversionCalibration {
    /// `κ = 1/(π ω_{n-1} 2^{1-k})` from the Jacobi inversion formula.
    pub fn analytic(alg: &HTypeAlgebra, lambda_max: f64) -> Self {
        let kappa = 1.0 / (PI * sphere_area(alg.n()) * 2f64.powi(1 - alg.k() as i32));
        Self { kappa, lambda_max }
    }

    /// Analytic constant with the cutoff `Λ = 40/R`.
    pub fn for_support(alg: &HTypeAlgebra, support_radius: f64) -> Self {
        Self::analytic(alg, 40.0 / support_radius)
    }

    /// Fits `κ` by sending `exp(-r²)` through the transform and back.
    pub fn calibrate(alg: &HTypeAlgebra, spec: &QuadratureSpec) -> Result<(Self, CalibrationReport)> {
        let width = 1.0;
        let lambda_max = 40.0 / width;
        let f = RadialFunction::gaussian(width)?;
        let profile = AbelProfile::new(alg, &f, lambda_max, spec)?;
        let unit = Self {
            kappa: 1.0,
            lambda_max,
        };
        let inv = RadialInverter::new(alg, &unit)?;
        let fhat: Vec<f64> = inv.lambdas().iter().map(|&l| profile.fourier_real(l)).collect();
        let rs: Vec<f64> = (0..=20).map(|j| 0.1 * j as f64).collect();
        let g = inv.invert_many(&fhat, &rs)?;
        let truth: Vec<f64> = rs.iter().map(|&r| f.eval(r)).collect();
        let num: f64 = truth.iter().zip(&g).map(|(a, b)| a * b).sum();
        let den: f64 = g.iter().map(|b| b * b).sum();
        let kappa_fit = num / den;
        let kappa_analytic = Self::analytic(alg, lambda_max).kappa;
        let round_trip_error = truth.iter().zip(&g).map(|(a, b)| (a - kappa_fit * b).abs()).fold(0.0, f64::max)
            / truth.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let report = CalibrationReport {
            kappa_fit,
            kappa_analytic,
            relative_gap: (kappa_fit - kappa_analytic).abs() / kappa_analytic,
            round_trip_error,
        };
        Ok((
            Self {
                kappa: kappa_fit,
                lambda_max,
            },
            report,
        ))
    }

    pub fn with_lambda_max(self, lambda_max: f64) -> Self {
        Self { lambda_max, ..self }
    }
}

/// Precomputed spectral grid for `f(r) = κ ∫_0^Λ f̃(λ) φ_λ(r) |c(2λ)|^{-2} dλ`.
#[derive(Debug, Clone)]
pub struct RadialInverter {
    params: JacobiParams,
    lambdas: Vec<f64>,
    /// Quadrature weight times `κ` times the Plancherel density.
    weights: Vec<f64>,
    lambda_max: f64,
}

impl RadialInverter {
    pub fn new(alg: &HTypeAlgebra, cal: &InversionCalibration) -> Result<Self> {
        if !(cal.lambda_max > 0.0 && cal.lambda_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("spectral cutoff {} must be positive", cal.lambda_max)));
        }
        let params = JacobiParams::from_algebra(alg);
        let panels = (cal.lambda_max / SPECTRAL_PANEL_WIDTH).ceil() as usize;
        let rule = GaussRule::new(SPECTRAL_NODES);
        let (lambdas, weights) = rule
            .composite(&uniform_breaks(0.0, cal.lambda_max, panels))
            .into_iter()
            .map(|(l, w)| (l, w * cal.kappa * crate::spherical::plancherel_density(&params, l)))
            .unzip();
        Ok(Self {
            params,
            lambdas,
            weights,
            lambda_max: cal.lambda_max,
        })
    }

    /// Spectral nodes at which `f̃` must be supplied.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn invert(&self, fhat: &[f64], r: f64) -> Result<f64> {
        crate::error::check_len(self.lambdas.len(), fhat.len())?;
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument(format!("radius {r} must be non-negative")));
        }
        if r == 0.0 {
            return Ok(fhat.iter().zip(&self.weights).map(|(f, w)| f * w).sum());
        }
        let kernel = KoornwinderKernel::new(&self.params, 0.5 * r, 2.0 * self.lambda_max, KERNEL_NODES)?;
        Ok(self
            .lambdas
            .iter()
            .zip(&self.weights)
            .zip(fhat)
            .map(|((&l, &w), &f)| w * f * kernel.eval_real(2.0 * l))
            .sum())
    }

    pub fn invert_many(&self, fhat: &[f64], rs: &[f64]) -> Result<Vec<f64>> {
        rs.par_iter().map(|&r| self.invert(fhat, r)).collect()
    }
}

/// `f(r)` from a spectral profile `fhat`.
pub fn radial_inversion(
    alg: &HTypeAlgebra,
    fhat: &dyn Fn(f64) -> f64,
    r: f64,
    cal: &InversionCalibration,
) -> Result<f64> {
    let inv = RadialInverter::new(alg, cal)?;
    let vals: Vec<f64> = inv.lambdas().iter().map(|&l| fhat(l)).collect();
    inv.invert(&vals, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::build_htype;
    use crate::spherical::spherical_phi;

    fn desk() -> HTypeAlgebra {
        build_htype(1, 1).unwrap()
    }

    #[test]
    fn zero_function_transforms_to_zero() {
        let alg = desk();
        let spec = QuadratureSpec::default();
        let f = RadialFunction::zero(1.0).unwrap();
        assert_eq!(abel_transform(&alg, &f, 0.2, &spec).unwrap(), 0.0);
        let s = spherical_transform_radial(&alg, &f, Complex64::new(2.0, 0.5), &spec).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        let cal = InversionCalibration::analytic(&alg, 10.0);
        assert_eq!(radial_inversion(&alg, &|_| 0.0, 0.5, &cal).unwrap(), 0.0);
    }

    #[test]
    fn abel_is_even_and_supported_in_the_ball() {
        let spec = QuadratureSpec::default();
        for (k, b) in [(1, 1), (3, 1)] {
            let alg = build_htype(k, b).unwrap();
            let f = RadialFunction::bump(1.0).unwrap();
            for t in [0.1, 0.4, 0.9] {
                let p = abel_transform(&alg, &f, t, &spec).unwrap();
                let m = abel_transform(&alg, &f, -t, &spec).unwrap();
                assert!((p - m).abs() < 1e-6 * p.abs().max(1e-300), "k={k} t={t}");
            }
            assert!(abel_transform(&alg, &f, 1.2, &spec).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn reduced_abel_matches_biradial_integral() {
        let spec = QuadratureSpec::default();
        for (k, b) in [(1, 1), (2, 1), (3, 1)] {
            let alg = build_htype(k, b).unwrap();
            let f = RadialFunction::bump(1.0).unwrap();
            for t in [-0.5, 0.0, 0.3] {
                let a = abel_transform(&alg, &f, t, &spec).unwrap();
                let b = abel_transform_biradial(&alg, &f, t, &spec, 1e-3).unwrap().value;
                assert!((a - b).abs() < 1e-8 * a.abs(), "k={k} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn spherical_transform_is_even_in_lambda() {
        let alg = desk();
        let spec = QuadratureSpec::default();
        let f = RadialFunction::bump(1.0).unwrap();
        for l in [Complex64::new(1.5, 0.0), Complex64::new(4.0, 0.7), Complex64::new(0.3, -1.2)] {
            let p = spherical_transform_radial(&alg, &f, l, &spec).unwrap();
            let m = spherical_transform_radial(&alg, &f, -l, &spec).unwrap();
            assert!((p - m).norm() < 1e-10 * p.norm(), "{l}");
        }
    }

    #[test]
    fn projection_slice_on_a_few_frequencies() {
        let alg = desk();
        let spec = QuadratureSpec::default();
        let f = RadialFunction::bump(1.0).unwrap();
        let prof = AbelProfile::new(&alg, &f, 20.0, &spec).unwrap();
        for l in [0.0, 2.5, 11.0, 20.0] {
            let lam = Complex64::new(l, 0.0);
            let d = (prof.fourier(lam) - spherical_transform_radial(&alg, &f, lam, &spec).unwrap()).norm();
            assert!(d < 1e-5, "λ={l}: {d}");
        }
    }

    #[test]
    fn dual_abel_of_one_is_phi_zero() {
        let alg = desk();
        let sph = SphereRule::new(alg.n(), 20000, 7).unwrap();
        let one = EvenLineFunction::constant(1.0);
        for r in [0.3, 1.0, 2.0] {
            let d = dual_abel(&alg, &one, r, &sph).unwrap();
            let p = spherical_phi(&alg, Complex64::new(0.0, 0.0), r).unwrap().re;
            assert!((d - p).abs() < 1e-6, "r={r}: {d} vs {p}");
        }
    }

    #[test]
    fn dual_abel_shrinking_sphere() {
        let alg = desk();
        let sph = SphereRule::new(alg.n(), 4000, 3).unwrap();
        let g = EvenLineFunction::new(f64::INFINITY, |t: f64| (t * t).cos() + 2.0).unwrap();
        let d = dual_abel(&alg, &g, 1e-2, &sph).unwrap();
        assert!((d - g.eval(0.0)).abs() < 1e-3);
        assert!(dual_abel(&alg, &g, 0.0, &sph).is_err());
    }

    #[test]
    fn odd_line_function_is_rejected() {
        assert!(EvenLineFunction::new(1.0, |t| t).is_err());
    }

    #[test]
    fn duality_pairing() {
        let alg = desk();
        let spec = QuadratureSpec::default();
        let sph = SphereRule::new(alg.n(), 20000, 11).unwrap();
        let f = RadialFunction::bump(1.0).unwrap();
        let g = EvenLineFunction::new(1.5, |t: f64| {
            let s = t / 1.5;
            if s.abs() < 1.0 {
                (-1.0 / (1.0 - s * s)).exp()
            } else {
                0.0
            }
        })
        .unwrap();
        let lhs = AbelProfile::new(&alg, &f, 1.0, &spec).unwrap().pair(&g);
        let rhs = radial_pairing(&alg, &f, |r| dual_abel(&alg, &g, r, &sph), &spec).unwrap();
        assert!((lhs - rhs).abs() < 1e-3 * lhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn calibration_recovers_the_analytic_constant() {
        let alg = desk();
        let (cal, rep) = InversionCalibration::calibrate(&alg, &QuadratureSpec::default()).unwrap();
        assert!(rep.relative_gap < 1e-6, "{rep:?}");
        assert!(rep.round_trip_error < 1e-3, "{rep:?}");
        assert_eq!(cal.kappa, rep.kappa_fit);
    }

    #[test]
    fn inversion_is_linear() {
        let alg = desk();
        let cal = InversionCalibration::analytic(&alg, 30.0);
        let f1 = |l: f64| (-l * l / 8.0).exp();
        let f2 = |l: f64| (-l * l / 20.0).exp() * (1.0 + l * l).recip();
        let (al, be) = (1.7, -0.4);
        for r in [0.0, 0.4, 1.3] {
            let a = radial_inversion(&alg, &f1, r, &cal).unwrap();
            let b = radial_inversion(&alg, &f2, r, &cal).unwrap();
            let c = radial_inversion(&alg, &|l| al * f1(l) + be * f2(l), r, &cal).unwrap();
            assert!((c - (al * a + be * b)).abs() < 1e-10 * c.abs().max(1e-12));
        }
    }

    #[test]
    fn gaussian_round_trip() {
        let alg = desk();
        let spec = QuadratureSpec::default();
        let f = RadialFunction::gaussian(0.7).unwrap();
        let cal = InversionCalibration::analytic(&alg, 40.0 / 0.7);
        let inv = RadialInverter::new(&alg, &cal).unwrap();
        let prof = AbelProfile::new(&alg, &f, cal.lambda_max, &spec).unwrap();
        let fh: Vec<f64> = inv.lambdas().iter().map(|&l| prof.fourier_real(l)).collect();
        for r in [0.0, 0.25, 0.8, 1.5] {
            let g = inv.invert(&fh, r).unwrap();
            assert!((g - f.eval(r)).abs() < 1e-3, "r={r}: {g} vs {}", f.eval(r));
        }
    }

    #[test]
    fn interpolant_reproduces_smooth_profile() {
        let rs: Vec<f64> = (0..=100).map(|j| 0.01 * j as f64).collect();
        let vals: Vec<f64> = rs.iter().map(|r| (r * 2.0).cos() * (1.0 - r * r)).collect();
        let f = RadialFunction::from_samples(&rs, &vals).unwrap();
        for r in [0.0, 0.005, 0.333, 0.777, 1.0] {
            assert!((f.eval(r) - (r * 2.0).cos() * (1.0 - r * r)).abs() < 1e-5, "r={r}");
        }
        assert_eq!(f.eval(1.01), 0.0);
        assert!(RadialFunction::from_samples(&[0.1, 0.2, 0.3], &[1.0, 1.0, 1.0]).is_err());
    }
}
