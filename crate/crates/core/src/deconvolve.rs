//! Radial deconvolution by the sphere measure: find `f` with `f ∗ σ_t = g`
//! by dividing spectra and inverting.

use serde::Serialize;

use crate::abel::{AbelProfile, InversionCalibration, RadialFunction, RadialInverter};
use crate::error::{Error, Result};
use crate::htype::HTypeAlgebra;
use crate::meanvalue::{radial_mean_value, ZonalSphereRule};
use crate::quad::QuadratureSpec;
use crate::spherical::{JacobiParams, KoornwinderKernel};

/// Scan step for sign changes of `λ ↦ φ_λ(t)`.
const ZERO_SCAN_STEP: f64 = 0.05;

/// `f ∗ σ_t = g` for radial `g`.
#[derive(Debug, Clone)]
pub struct DeconvolutionProblem {
    pub g: RadialFunction,
    pub t: f64,
    /// Spectral cutoff; the grid is the inverter's Gauss grid on `[0, Λ]`.
    pub lambda_max: f64,
    /// Smallest allowed distance between a grid node and a real zero of `φ_λ(t)`.
    pub zero_guard: f64,
    pub r_grid: Vec<f64>,
}

impl DeconvolutionProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(Error::InvalidArgument(format!("t = {} must be positive", self.t)));
        }
        if !(self.zero_guard > 0.0) {
            return Err(Error::InvalidArgument(format!("zero guard {} must be positive", self.zero_guard)));
        }
        if !(self.lambda_max > 0.0) {
            return Err(Error::InvalidArgument(format!("Λ = {} must be positive", self.lambda_max)));
        }
        if self.r_grid.is_empty() || self.r_grid.windows(2).any(|w| w[1] <= w[0]) || self.r_grid[0] < 0.0 {
            return Err(Error::InvalidArgument("r grid must be non-empty, non-negative and increasing".into()));
        }
        Ok(())
    }
}

/// Recovered profile with the spectral data that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct DeconvolutionResult {
    pub r_grid: Vec<f64>,
    pub f_rec: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub zeros: Vec<f64>,
    /// Distance from the grid to the nearest zero of `φ_λ(t)`.
    pub min_zero_distance: f64,
    /// `max |φ_λ(t)|^{-1}` over the grid.
    pub max_division_gain: f64,
}

impl DeconvolutionResult {
    /// Cubic interpolant of the recovered samples.
    pub fn interpolant(&self) -> Result<RadialFunction> {
        RadialFunction::from_samples(&self.r_grid, &self.f_rec)
    }
}

/// Real zeros of `λ ↦ φ_λ(t)` on `[0, λ_max]`, by a sign-change scan and bisection.
pub fn locate_phi_zeros(params: &JacobiParams, t: f64, lambda_max: f64) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
    }
    let kernel = KoornwinderKernel::new(params, 0.5 * t, 2.0 * (lambda_max + ZERO_SCAN_STEP), 8)?;
    let phi = |l: f64| kernel.eval_real(2.0 * l);
    let steps = (lambda_max / ZERO_SCAN_STEP).ceil() as usize;
    let mut zeros = Vec::new();
    let (mut lo, mut flo) = (0.0, phi(0.0));
    for j in 1..=steps {
        let hi = (j as f64 * ZERO_SCAN_STEP).min(lambda_max);
        let fhi = phi(hi);
        if flo == 0.0 {
            zeros.push(lo);
        } else if flo * fhi < 0.0 {
            let (mut a, mut b, mut fa) = (lo, hi, flo);
            while b - a > 1e-12 {
                let m = 0.5 * (a + b);
                let fm = phi(m);
                if fm * fa > 0.0 {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        lo = hi;
        flo = fhi;
    }
    Ok(zeros)
}

/// `f̃ = g̃/φ_λ(t)` on the inverter grid, then radial inversion on `r_grid`.
pub fn solve(
    alg: &HTypeAlgebra,
    prob: &DeconvolutionProblem,
    cal: &InversionCalibration,
    spec: &QuadratureSpec,
) -> Result<DeconvolutionResult> {
    prob.validate()?;
    if !(cal.kappa.is_finite() && cal.kappa > 0.0) {
        return Err(Error::Config("inversion calibration missing".into()));
    }
    let params = JacobiParams::from_algebra(alg);
    let cal = cal.with_lambda_max(prob.lambda_max);
    let inv = RadialInverter::new(alg, &cal)?;
    let lambdas = inv.lambdas().to_vec();
    let zeros = locate_phi_zeros(&params, prob.t, prob.lambda_max + 1.0)?;
    let mut min_zero_distance = f64::INFINITY;
    for &l in &lambdas {
        let i = zeros.partition_point(|&z| z < l);
        for z in [i.checked_sub(1).map(|j| zeros[j]), zeros.get(i).copied()].into_iter().flatten() {
            min_zero_distance = min_zero_distance.min((z - l).abs());
        }
        if min_zero_distance < prob.zero_guard {
            return Err(Error::Domain(format!(
                "spectral node λ = {l} lies within {} of a zero of φ_λ({})",
                prob.zero_guard, prob.t
            )));
        }
    }
    let kernel = KoornwinderKernel::new(&params, 0.5 * prob.t, 2.0 * prob.lambda_max, 8)?;
    let profile = AbelProfile::new(alg, &prob.g, prob.lambda_max, spec)?;
    let mut max_division_gain = 0.0f64;
    let fhat: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let p = if l == 0.0 { kernel.eval_real(0.0) } else { kernel.eval_real(2.0 * l) };
            max_division_gain = max_division_gain.max(1.0 / p.abs());
            profile.fourier_real(l) / p
        })
        .collect();
    let f_rec = inv.invert_many(&fhat, &prob.r_grid)?;
    Ok(DeconvolutionResult {
        r_grid: prob.r_grid.clone(),
        f_rec,
        lambda_grid: lambdas,
        zeros,
        min_zero_distance,
        max_division_gain,
    })
}

/// `M_t f` tabulated on `[0, R+t]` and interpolated.
pub fn tabulate_mean_value(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    t: f64,
    step: f64,
    sphere: &ZonalSphereRule,
) -> Result<RadialFunction> {
    let reach = f.support_radius() + t;
    let n = (reach / step).ceil() as usize;
    let rs: Vec<f64> = (0..=n).map(|j| reach * j as f64 / n as f64).collect();
    let vals = rs
        .iter()
        .map(|&r| radial_mean_value(alg, &|d| f.eval(d), r, t, sphere))
        .collect::<Result<Vec<_>>>()?;
    RadialFunction::from_samples(&rs, &vals)
}

/// `‖M_t f - g‖_∞ / ‖g‖_∞` over `check_grid`.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub check_grid: Vec<f64>,
    pub mt_f: Vec<f64>,
    pub g: Vec<f64>,
    pub relative_residual: f64,
}

pub fn residual(
    alg: &HTypeAlgebra,
    f: &RadialFunction,
    g: &dyn Fn(f64) -> Result<f64>,
    t: f64,
    check_grid: &[f64],
    sphere: &ZonalSphereRule,
) -> Result<ResidualReport> {
    let mt_f = check_grid
        .iter()
        .map(|&r| radial_mean_value(alg, &|d| f.eval(d), r, t, sphere))
        .collect::<Result<Vec<_>>>()?;
    let gv = check_grid.iter().map(|&r| g(r)).collect::<Result<Vec<_>>>()?;
    let scale = gv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = mt_f.iter().zip(&gv).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(ResidualReport {
        check_grid: check_grid.to_vec(),
        mt_f,
        g: gv,
        relative_residual: if scale > 0.0 { err / scale } else { err },
    })
}

/// Settings of the forward-then-inverse demonstration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DemoSettings {
    pub t: f64,
    pub bump_radius: f64,
    pub lambda_max: f64,
    pub zero_guard: f64,
    pub g_step: f64,
    pub r_step: f64,
    pub check_step: f64,
}

impl Default for DemoSettings {
    fn default() -> Self {
        Self {
            t: 1.0,
            bump_radius: 1.0,
            lambda_max: 100.0,
            zero_guard: 1e-6,
            g_step: 0.0025,
            r_step: 0.02,
            check_step: 0.05,
        }
    }
}

/// Outcome of [`demo`].
#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub settings: DemoSettings,
    pub solution: DeconvolutionResult,
    pub f_true: Vec<f64>,
    /// `‖f_rec - f_0‖_∞ / ‖f_0‖_∞` on the output grid.
    pub recovery_error: f64,
    pub residual: ResidualReport,
}

/// `g = M_t f_0` for a bump `f_0`, then recover `f_0` from `g`.
pub fn demo(
    alg: &HTypeAlgebra,
    settings: DemoSettings,
    cal: &InversionCalibration,
    spec: &QuadratureSpec,
    sphere: &ZonalSphereRule,
) -> Result<DemoReport> {
    let f0 = RadialFunction::bump(settings.bump_radius)?;
    let g = tabulate_mean_value(alg, &f0, settings.t, settings.g_step, sphere)?;
    let nr = (settings.bump_radius / settings.r_step).round() as usize;
    let r_grid: Vec<f64> = (0..=nr).map(|j| settings.bump_radius * j as f64 / nr as f64).collect();
    let prob = DeconvolutionProblem {
        g,
        t: settings.t,
        lambda_max: settings.lambda_max,
        zero_guard: settings.zero_guard,
        r_grid,
    };
    let solution = solve(alg, &prob, cal, spec)?;
    let f_true: Vec<f64> = solution.r_grid.iter().map(|&r| f0.eval(r)).collect();
    let peak = f_true.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let recovery_error = solution
        .f_rec
        .iter()
        .zip(&f_true)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / peak;
    let f_rec = solution.interpolant()?;
    let reach = settings.bump_radius + settings.t;
    let nc = (reach / settings.check_step).round() as usize;
    let check: Vec<f64> = (0..=nc).map(|j| reach * j as f64 / nc as f64).collect();
    let residual = residual(
        alg,
        &f_rec,
        &|r| radial_mean_value(alg, &|d| f0.eval(d), r, settings.t, sphere),
        settings.t,
        &check,
        sphere,
    )?;
    Ok(DemoReport {
        settings,
        solution,
        f_true,
        recovery_error,
        residual,
    })
}

/// `|M_t f_rec - M_t f_0|` on the output grid of a demo.
pub fn radial_residual_at(
    alg: &HTypeAlgebra,
    report: &DemoReport,
    f0: &RadialFunction,
    sphere: &ZonalSphereRule,
) -> Result<Vec<f64>> {
    let f = report.solution.interpolant()?;
    let t = report.settings.t;
    report
        .solution
        .r_grid
        .iter()
        .map(|&r| {
            let a = radial_mean_value(alg, &|d| f.eval(d), r, t, sphere)?;
            let b = radial_mean_value(alg, &|d| f0.eval(d), r, t, sphere)?;
            Ok((a - b).abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::build_htype;
    use std::f64::consts::PI;

    fn desk() -> HTypeAlgebra {
        build_htype(1, 1).unwrap()
    }

    #[test]
    fn zeros_follow_the_asymptotic_spacing() {
        let params = JacobiParams::from_algebra(&desk());
        let t = 1.0;
        let zeros = locate_phi_zeros(&params, t, 120.0).unwrap();
        assert!(zeros.len() > 20);
        assert!(zeros[0] > 0.5);
        let tail = &zeros[zeros.len() - 6..];
        for w in tail.windows(2) {
            let ratio = (w[1] - w[0]) / (PI / t);
            assert!((ratio - 1.0).abs() < 0.05, "spacing ratio {ratio}");
        }
        let kernel = KoornwinderKernel::new(&params, 0.5 * t, 250.0, 8).unwrap();
        assert!(kernel.eval_real(0.0) > 0.0);
        for &z in &zeros[..5] {
            let step = 1e-9;
            assert!(kernel.eval_real(2.0 * (z - step)) * kernel.eval_real(2.0 * (z + step)) <= 0.0);
        }
    }

    fn small_problem(g: RadialFunction) -> DeconvolutionProblem {
        DeconvolutionProblem {
            g,
            t: 0.5,
            lambda_max: 20.0,
            zero_guard: 1e-6,
            r_grid: vec![0.0, 0.25, 0.5, 0.75],
        }
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let alg = desk();
        let cal = InversionCalibration::analytic(&alg, 20.0);
        let sol = solve(&alg, &small_problem(RadialFunction::zero(1.5).unwrap()), &cal, &QuadratureSpec::default())
            .unwrap();
        assert!(sol.f_rec.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn solution_is_linear_in_the_data() {
        let alg = desk();
        let cal = InversionCalibration::analytic(&alg, 20.0);
        let spec = QuadratureSpec::default();
        let g1 = RadialFunction::bump(1.5).unwrap();
        let g2 = RadialFunction::gaussian(0.4).unwrap();
        let mix = {
            let (a, b) = (g1.clone(), g2.clone());
            RadialFunction::compact(2.4, "mix", move |r| 2.0 * a.eval(r) - 3.0 * b.eval(r)).unwrap()
        };
        let s1 = solve(&alg, &small_problem(g1), &cal, &spec).unwrap();
        let s2 = solve(&alg, &small_problem(g2), &cal, &spec).unwrap();
        let sm = solve(&alg, &small_problem(mix), &cal, &spec).unwrap();
        let scale = sm.f_rec.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..sm.f_rec.len() {
            let lin = 2.0 * s1.f_rec[i] - 3.0 * s2.f_rec[i];
            assert!((sm.f_rec[i] - lin).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn grid_near_a_zero_is_refused() {
        let alg = desk();
        let cal = InversionCalibration::analytic(&alg, 20.0);
        let mut prob = small_problem(RadialFunction::bump(1.0).unwrap());
        prob.zero_guard = 0.5;
        assert!(matches!(solve(&alg, &prob, &cal, &QuadratureSpec::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn missing_calibration_is_an_error() {
        let alg = desk();
        let mut cal = InversionCalibration::analytic(&alg, 20.0);
        cal.kappa = f64::NAN;
        let prob = small_problem(RadialFunction::bump(1.0).unwrap());
        assert!(matches!(solve(&alg, &prob, &cal, &QuadratureSpec::default()), Err(Error::Config(_))));
    }

    #[test]
    fn zonal_rule_matches_the_full_sphere_rule() {
        let alg = desk();
        let f0 = RadialFunction::bump(1.0).unwrap();
        let zonal = ZonalSphereRule::new(&alg, 160, 32).unwrap();
        let full = crate::quad::SphereRule::new(alg.n(), 80000, 7).unwrap();
        for r in [0.2f64, 0.5, 1.0] {
            let x = crate::nagroup::NAPoint::on_axis(&alg, r.exp()).unwrap();
            let a = radial_mean_value(&alg, &|d| f0.eval(d), r, 1.0, &zonal).unwrap();
            let b = crate::meanvalue::mean_value(
                &alg,
                &|p| f0.eval(crate::nagroup::distance_to_origin(&alg, p).unwrap()),
                &x,
                1.0,
                &full,
            )
            .unwrap();
            assert!((a - b).abs() < 1e-5 * a.abs(), "r={r}: {a} vs {b}");
        }
    }
}
