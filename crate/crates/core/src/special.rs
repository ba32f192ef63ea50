//! Gamma function, sphere areas and double-double complex arithmetic.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use twofloat::TwoFloat;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln sin(w)`, stable for large `|Im w|`. The branch is not normalized.
fn ln_sin(w: Complex64) -> Complex64 {
    if w.im < 0.0 {
        return ln_sin(w.conj()).conj();
    }
    let i = Complex64::i();
    -i * w + (i * 0.5).ln() + (Complex64::new(1.0, 0.0) - (2.0 * i * w).exp()).ln()
}

/// Principal-ish `ln Γ(z)`: the real part is exact, the imaginary part is
/// correct modulo `2π`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - ln_gamma(one - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (j, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + j as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma_real(x: f64) -> f64 {
    ln_gamma_real(x).exp()
}

/// Surface area `ω_{d-1}` of the unit sphere `S^{d-1} ⊂ R^d`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma_real(h)
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Rising factorial `(x)_n`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).map(|j| x + f64::from(j)).product()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|j| f64::from(n - j) / f64::from(j + 1)).product()
}

/// Double-double quotient refined by two correction steps; the crate's own
/// division is accurate only to about one double.
/// `Σ w_i cos(μ s_i)` for complex `μ`.
pub(crate) fn cosine_sum(nodes: &[f64], weights: &[f64], mu: Complex64) -> Complex64 {
    if mu.im == 0.0 {
        return Complex64::new(nodes.iter().zip(weights).map(|(&s, &w)| (mu.re * s).cos() * w).sum(), 0.0);
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (&s, &w) in nodes.iter().zip(weights) {
        let (sn, cs) = (mu.re * s).sin_cos();
        let e = (mu.im * s).exp();
        let ei = 1.0 / e;
        re += w * cs * 0.5 * (e + ei);
        im -= w * sn * 0.5 * (e - ei);
    }
    Complex64::new(re, im)
}

pub(crate) fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r1 = a - b * TwoFloat::from(q1);
    let q2 = r1.hi() / b.hi();
    let r2 = r1 - b * TwoFloat::from(q2);
    let q3 = r2.hi() / b.hi();
    TwoFloat::from(q1) + TwoFloat::from(q2) + TwoFloat::from(q3)
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DdComplex {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl DdComplex {
    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }

    pub fn scale(self, s: TwoFloat) -> Self {
        Self {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn norm1(self) -> f64 {
        f64::from(self.re).abs() + f64::from(self.im).abs()
    }

    pub fn div(self, o: Self) -> Self {
        let den = o.re * o.re + o.im * o.im;
        Self {
            re: dd_div(self.re * o.re + self.im * o.im, den),
            im: dd_div(self.im * o.re - self.re * o.im, den),
        }
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_values() {
        assert_relative_eq!(gamma_real(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_real(3.5), 15.0 * PI.sqrt() / 8.0, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma_real(101.0), 363.739_375_555_563_5, max_relative = 1e-14);
    }

    #[test]
    fn gamma_imaginary_axis_modulus() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.0, 7.0, 150.0, 600.0] {
            let lhs = 2.0 * ln_gamma(Complex64::new(0.0, y)).re;
            let rhs = PI.ln() - y.ln() - (PI * y + (-(-2.0 * PI * y).exp()).ln_1p() - 2f64.ln());
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13, epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_recurrence_complex() {
        for z in [Complex64::new(0.7, 2.0), Complex64::new(-1.3, 0.4), Complex64::new(4.0, -9.0)] {
            let lhs = (ln_gamma(z + 1.0) - ln_gamma(z)).exp();
            assert!((lhs - z).norm() < 1e-12 * z.norm());
        }
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(1), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
    }

    #[test]
    fn double_double_division() {
        let three = TwoFloat::from(3.0);
        let q = dd_div(TwoFloat::from(1.0), three);
        let r = q * three - TwoFloat::from(1.0);
        assert!(f64::from(r).abs() < 1e-31);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), 120.0);
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(binomial(5, 2), 10.0);
    }
}
