//! Numerical checks of the slow-decrease condition
//! `sup{|F(ζ)| : |ζ-ξ| ≤ A log(2+|ξ|)} ≥ B (C+|ξ|)^{-D}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanvalue::{c_coefficient, phi_k_rule, ByPartsIntegrator, CosineRule};
use crate::quad::QuadratureSpec;
use crate::special::factorial;
use crate::spherical::{JacobiParams, KoornwinderKernel};

/// Entire function of one complex variable.
pub type EntireFn<'a> = dyn Fn(Complex64) -> Result<Complex64> + Sync + 'a;

pub const DEFAULT_DISC_SAMPLES: usize = 256;
pub const DEFAULT_XI_POINTS: usize = 200;

/// Constants `(A, B, C, D)` and the sampled `ξ` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlowDecreaseWitness {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points: usize,
    pub disc_samples: usize,
}

impl SlowDecreaseWitness {
    pub fn new(a: f64, b: f64, c: f64, d: f64, xi_min: f64, xi_max: f64) -> Result<Self> {
        let w = Self {
            a,
            b,
            c,
            d,
            xi_min,
            xi_max,
            xi_points: DEFAULT_XI_POINTS,
            disc_samples: DEFAULT_DISC_SAMPLES,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.b > 0.0 && self.c > 0.0 && self.d >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "witness needs A, B, C > 0 and D ≥ 0, got {:?}",
                (self.a, self.b, self.c, self.d)
            )));
        }
        if !(self.xi_min >= 0.0 && self.xi_max >= self.xi_min) {
            return Err(Error::InvalidArgument(format!("bad ξ range [{}, {}]", self.xi_min, self.xi_max)));
        }
        if self.xi_points < 2 || self.disc_samples < 8 {
            return Err(Error::InvalidArgument("need at least 2 ξ points and 8 disc samples".into()));
        }
        Ok(())
    }

    fn bound(&self, xi: f64) -> f64 {
        self.b * (self.c + xi.abs()).powf(-self.d)
    }

    /// Largest `|Re ζ|` reached by the discs.
    pub fn reach(&self) -> f64 {
        self.xi_max + self.a * (2.0 + self.xi_max).ln()
    }
}

/// Outcome of [`check_slow_decrease`].
#[derive(Debug, Clone, Serialize)]
pub struct SlowDecreaseStatus {
    pub pass: bool,
    /// `ξ` with the smallest margin.
    pub worst_xi: f64,
    /// `min_ξ ln(sup|F| / (B (C+ξ)^{-D}))`; non-negative iff every `ξ` passes.
    pub margin: f64,
    pub xi_checked: usize,
    pub sampling: String,
}

/// `ξ` grid and the sampled disc suprema for one disc constant `A`.
#[derive(Debug, Clone)]
pub struct DiscSuprema {
    pub xi: Vec<f64>,
    pub sup: Vec<f64>,
}

fn xi_grid(w: &SlowDecreaseWitness) -> Vec<f64> {
    let n = w.xi_points;
    (0..n)
        .map(|j| w.xi_min + (w.xi_max - w.xi_min) * j as f64 / (n - 1) as f64)
        .collect()
}

/// Sup of `|F|` over the boundary circle and the real chord of each disc.
pub fn disc_suprema(f: &EntireFn<'_>, w: &SlowDecreaseWitness) -> Result<DiscSuprema> {
    w.validate()?;
    let xi = xi_grid(w);
    let half = w.disc_samples / 2;
    let sup = xi
        .iter()
        .map(|&x| {
            let rad = w.a * (2.0 + x.abs()).ln();
            let mut best = 0.0f64;
            for j in 0..half {
                let th = 2.0 * PI * j as f64 / half as f64;
                let z = Complex64::new(x + rad * th.cos(), rad * th.sin());
                best = best.max(f(z)?.norm());
            }
            let chord = w.disc_samples - half;
            for j in 0..chord {
                let s = -rad + 2.0 * rad * j as f64 / (chord - 1).max(1) as f64;
                best = best.max(f(Complex64::new(x + s, 0.0))?.norm());
            }
            if best.is_finite() {
                Ok(best)
            } else {
                Err(Error::Quadrature(format!("non-finite |F| on the disc at ξ = {x}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscSuprema { xi, sup })
}

fn judge(sup: &DiscSuprema, w: &SlowDecreaseWitness) -> SlowDecreaseStatus {
    let (mut margin, mut worst_xi) = (f64::INFINITY, w.xi_min);
    for (&x, &s) in sup.xi.iter().zip(&sup.sup) {
        let m = if s > 0.0 { s.ln() - w.bound(x).ln() } else { f64::NEG_INFINITY };
        if m < margin {
            margin = m;
            worst_xi = x;
        }
    }
    SlowDecreaseStatus {
        pass: margin >= 0.0,
        worst_xi,
        margin,
        xi_checked: sup.xi.len(),
        sampling: format!(
            "{} points per disc: boundary circle and real chord, interior not sampled",
            w.disc_samples
        ),
    }
}

/// Checks the slow-decrease inequality for every `ξ` on the witness grid.
pub fn check_slow_decrease(f: &EntireFn<'_>, w: &SlowDecreaseWitness) -> Result<SlowDecreaseStatus> {
    Ok(judge(&disc_suprema(f, w)?, w))
}

/// Candidate constants, tried in lexicographic order `(A, B, C, D)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessGrid {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

impl Default for WitnessGrid {
    fn default() -> Self {
        Self {
            a: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            b: vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6],
            c: vec![1.0],
            d: (0..=8).map(f64::from).collect(),
        }
    }
}

/// First passing witness of the grid, or `None`.
pub fn find_witness(
    f: &EntireFn<'_>,
    xi_range: (f64, f64),
    grid: &WitnessGrid,
) -> Result<Option<SlowDecreaseWitness>> {
    for &a in &grid.a {
        let probe = SlowDecreaseWitness::new(a, 1.0, 1.0, 0.0, xi_range.0, xi_range.1)?;
        let sup = disc_suprema(f, &probe)?;
        for &b in &grid.b {
            for &c in &grid.c {
                for &d in &grid.d {
                    let w = SlowDecreaseWitness { b, c, d, ..probe };
                    w.validate()?;
                    if judge(&sup, &w).pass {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `λ ↦ φ_λ(t)` on the spherical side, through one Koornwinder kernel in
/// the Jacobi variables `(2λ, t/2)`. Four-point panels at ten per period
/// give about nine digits, ample for disc suprema.
pub fn spherical_phi_target(params: &JacobiParams, t: f64, lambda_reach: f64) -> Result<impl Fn(Complex64) -> Result<Complex64> + Sync> {
    let kernel = KoornwinderKernel::new(params, 0.5 * t, 2.0 * lambda_reach, 4)?;
    Ok(move |z: Complex64| Ok(kernel.eval(2.0 * z)))
}

/// `λ ↦ Φ_k(λ)` at Jacobi radius `t`.
pub fn phi_k_target(
    params: &JacobiParams,
    t: f64,
    lambda_reach: f64,
    spec: &QuadratureSpec,
) -> Result<impl Fn(Complex64) -> Result<Complex64> + Sync> {
    let rule: CosineRule = phi_k_rule(params, t, lambda_reach, spec)?;
    Ok(move |z: Complex64| rule.eval(z))
}

/// `A = (N+1)! (sinh t)^N`, `D = N+1`, `B = A/2^{N+2}`, `C = 1`.
pub fn stated_witness(big_n: u32, t: f64, xi_min: f64, xi_max: f64) -> Result<SlowDecreaseWitness> {
    let a = factorial(big_n + 1) * t.sinh().powi(big_n as i32);
    SlowDecreaseWitness::new(a, a / 2f64.powi(big_n as i32 + 2), 1.0, big_n as f64 + 1.0, xi_min, xi_max)
}

/// Numerical replay of the lower-bound argument for `Φ_k`, `k` even.
#[derive(Debug, Clone, Serialize)]
pub struct PhiSlowDecreaseReport {
    pub n: f64,
    pub k: f64,
    pub t: f64,
    pub big_n: u32,
    pub witness: SlowDecreaseWitness,
    /// Smallest grid `ξ` from which `A log(2+ξ) ≤ ξ/2` and `t|V_ξ| > 2π` hold.
    pub xi0: f64,
    /// `N! (sinh t)^N`, the leading coefficient obtained by integration by parts.
    pub leading_constant: f64,
    /// `(N+1)! (sinh t)^N`, the coefficient as stated.
    pub stated_leading_constant: f64,
    /// `sup_{λ ≥ ξ₀/2} |Φ_k(λ) - leading(λ)| λ^{N+3/2}`.
    pub remainder_constant: f64,
    /// Every `ξ` had `λ₀ ∈ V_ξ` with `sin(λ₀t - Nπ/2) ≥ 0.99` and
    /// `|Φ_k(λ₀)| ≥ 0.99 L λ₀^{-N-1} - C λ₀^{-N-3/2} > 0`.
    pub chain_holds: bool,
    /// Smallest `|Φ_k(λ₀)| / bound` over the grid.
    pub chain_margin: f64,
    /// Smallest `ξ` with `0.99 L (2ξ)^{-N-1} > C (ξ/2+1)^{-N-3/2}`, the bound
    /// obtained from `ξ/2 ≤ λ₀ ≤ 2ξ` alone.
    pub coarse_bound_xi: f64,
    pub status: SlowDecreaseStatus,
}

/// Builds the witness, locates `ξ₀`, replays the inequality chain on
/// `[ξ₀, ξ_max]` and runs the disc checker.
pub fn phi_lambda_slow_decrease_report(
    params: &JacobiParams,
    t: f64,
    xi_max: f64,
    spec: &QuadratureSpec,
) -> Result<PhiSlowDecreaseReport> {
    let (n_ord, m_ord) = (params.alpha - 0.5, params.beta - 0.5);
    if params.k() < 4.0 || m_ord.fract() != 0.0 || n_ord.fract() != 0.0 || n_ord < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "report needs even k ≥ 4 and odd n, got k = {}",
            params.k()
        )));
    }
    let (big_n, big_m) = (n_ord as u32, m_ord as u32);
    let probe = stated_witness(big_n, t, 0.0, xi_max)?;
    let a = probe.a;
    let ok = |x: f64| a * (2.0 + x).ln() <= 0.5 * x && 2.0 * a * (2.0 + x).ln() * t > 2.0 * PI;
    let grid: Vec<f64> = (0..=(xi_max.ceil() as usize * 4)).map(|j| 0.25 * j as f64).collect();
    let first_bad_from_top = grid.iter().rposition(|&x| !ok(x));
    let xi0 = match first_bad_from_top {
        None => grid[0],
        Some(i) if i + 1 < grid.len() => grid[i + 1],
        _ => return Err(Error::Domain(format!("ξ₀ not found below ξ_max = {xi_max}"))),
    };
    let witness = SlowDecreaseWitness { xi_min: xi0, ..probe };

    // Real-axis values from the exact by-parts route for the Ĩ_{N+ℓ}.
    let reach = witness.reach() + 1.0;
    let ch = t.cosh();
    let parts = (0..=big_m)
        .map(|l| {
            Ok((
                c_coefficient(l, big_m, big_n as f64) * (2.0 * ch).powi(-(l as i32)),
                ByPartsIntegrator::new(t, big_n + l, 4, reach)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi_real = |l: f64| -> Result<f64> {
        let mut s = 0.0;
        for (c, p) in &parts {
            s += c * p.eval(l)?;
        }
        Ok(s)
    };
    let lead_c = factorial(big_n) * t.sinh().powi(big_n as i32);
    let stated = factorial(big_n + 1) * t.sinh().powi(big_n as i32);
    let shift = big_n as f64 * FRAC_PI_2;
    let lead = |l: f64| lead_c * l.powi(-(big_n as i32) - 1) * (l * t - shift).sin();

    let mut remainder_constant = 0.0f64;
    let mut l = (0.5 * xi0).max(1.0);
    while l <= reach {
        remainder_constant = remainder_constant.max((phi_real(l)? - lead(l)).abs() * l.powf(big_n as f64 + 1.5));
        l += 0.05;
    }

    let mut chain_holds = true;
    let mut chain_margin = f64::INFINITY;
    let ng = DEFAULT_XI_POINTS;
    for j in 0..ng {
        let xi = xi0 + (xi_max - xi0) * j as f64 / (ng - 1) as f64;
        let rad = a * (2.0 + xi).ln();
        // λ₀ with λ₀t - Nπ/2 ≡ π/2 (mod 2π), nearest to ξ inside V_ξ.
        let kk = ((xi * t - shift - FRAC_PI_2) / (2.0 * PI)).round();
        let l0 = (FRAC_PI_2 + shift + 2.0 * PI * kk) / t;
        let inside = (l0 - xi).abs() <= rad && (l0 * t - shift).sin() >= 0.99;
        let bound = lead_c * 0.99 * l0.powi(-(big_n as i32) - 1) - remainder_constant * l0.powf(-(big_n as f64) - 1.5);
        let value = phi_real(l0)?.abs();
        if !inside || bound <= 0.0 || value < bound {
            chain_holds = false;
        }
        chain_margin = chain_margin.min(if bound > 0.0 { value / bound } else { 0.0 });
    }

    let coarse = |x: f64| {
        lead_c * 0.99 * (2.0 * x).powi(-(big_n as i32) - 1) - remainder_constant * (0.5 * x + 1.0).powf(-(big_n as f64) - 1.5)
    };
    let mut coarse_bound_xi = xi0.max(1.0);
    while coarse(coarse_bound_xi) <= 0.0 && coarse_bound_xi < 1e12 {
        coarse_bound_xi *= 1.01;
    }

    // Six nodes per 1/10-period panel already resolve the cosines to rounding.
    let disc_spec = QuadratureSpec {
        nodes_1d: spec.nodes_1d.min(6),
        ..spec.clone()
    };
    let target = phi_k_target(params, t, witness.reach(), &disc_spec)?;
    let status = check_slow_decrease(&target, &witness)?;
    Ok(PhiSlowDecreaseReport {
        n: 2.0 * params.alpha + 2.0,
        k: params.k(),
        t,
        big_n,
        witness,
        xi0,
        leading_constant: lead_c,
        stated_leading_constant: stated,
        remainder_constant,
        chain_holds,
        chain_margin,
        coarse_bound_xi,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(_: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    fn sinc(z: Complex64) -> Result<Complex64> {
        Ok(if z.norm() < 1e-8 { Complex64::new(1.0, 0.0) } else { z.sin() / z })
    }

    #[test]
    fn constant_passes() {
        let w = SlowDecreaseWitness::new(1.0, 1.0, 1.0, 0.0, 0.0, 200.0).unwrap();
        let s = check_slow_decrease(&one, &w).unwrap();
        assert!(s.pass);
        assert!(s.margin.abs() < 1e-12);
        assert_eq!(s.xi_checked, 200);
    }

    #[test]
    fn sinc_passes_and_fails_with_large_b() {
        let w = SlowDecreaseWitness::new(1.0, 0.5, 1.0, 1.0, 0.0, 200.0).unwrap();
        assert!(check_slow_decrease(&sinc, &w).unwrap().pass);
        let w = SlowDecreaseWitness { b: 100.0, ..w };
        assert!(!check_slow_decrease(&sinc, &w).unwrap().pass);
    }

    #[test]
    fn witness_search() {
        let g = WitnessGrid::default();
        let w = find_witness(&one, (0.0, 200.0), &g).unwrap().unwrap();
        assert_eq!((w.a, w.b, w.c, w.d), (0.5, 1.0, 1.0, 0.0));
        let gauss = |z: Complex64| Ok((-z * z).exp());
        assert!(find_witness(&gauss, (0.0, 200.0), &g).unwrap().is_none());
    }

    #[test]
    fn bad_witness_is_rejected() {
        assert!(SlowDecreaseWitness::new(0.0, 1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(SlowDecreaseWitness::new(1.0, 1.0, 1.0, -1.0, 0.0, 1.0).is_err());
        assert!(SlowDecreaseWitness::new(1.0, 1.0, 1.0, 0.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn stated_witness_scaling() {
        let w1 = stated_witness(2, 1.0, 0.0, 10.0).unwrap();
        let w2 = stated_witness(2, 2.0, 0.0, 10.0).unwrap();
        assert!((w2.a / w1.a - (2f64.sinh() / 1f64.sinh()).powi(2)).abs() < 1e-12);
        assert_eq!(w1.d, 3.0);
        assert!((w1.b - w1.a / 16.0).abs() < 1e-15);
    }

    #[test]
    fn leading_term_alone_passes() {
        let (big_n, t) = (2u32, 1.0f64);
        let w = stated_witness(big_n, t, 80.0, 200.0).unwrap();
        let lead_c = factorial(big_n) * t.sinh().powi(2);
        let f = move |z: Complex64| Ok(lead_c * z.powi(-3) * (z * t - PI).sin());
        assert!(check_slow_decrease(&f, &w).unwrap().pass);
    }

    #[test]
    fn phi_k_report_for_k_four() {
        let p = JacobiParams::from_nk(7, 4).unwrap();
        let rep = phi_lambda_slow_decrease_report(&p, 1.0, 200.0, &QuadratureSpec::default()).unwrap();
        assert!(rep.status.pass, "{:?}", rep.status);
        assert!(rep.chain_holds, "{rep:?}");
        assert!(rep.xi0 > 0.0 && rep.xi0 < 200.0);
        assert_eq!(rep.big_n, 2);
    }
}
