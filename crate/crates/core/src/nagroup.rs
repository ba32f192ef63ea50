//! Arithmetic and geometry of the solvable group `S = N ⋊ A`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{check_len, Error, Result};
use crate::htype::HTypeAlgebra;
use crate::quad::SphereRule;

/// A point `(X, Z, a)` stored as `(X, Z, t = log a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NAPoint {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub t: f64,
}

/// A point `(X', Z', l')` of the open unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    pub xp: Vec<f64>,
    pub zp: Vec<f64>,
    pub lp: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

impl NAPoint {
    pub fn identity(alg: &HTypeAlgebra) -> Self {
        Self {
            x: vec![0.0; alg.m()],
            z: vec![0.0; alg.k()],
            t: 0.0,
        }
    }

    pub fn new(alg: &HTypeAlgebra, x: Vec<f64>, z: Vec<f64>, a: f64) -> Result<Self> {
        check_len(alg.m(), x.len())?;
        check_len(alg.k(), z.len())?;
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("a = {a} must be positive and finite")));
        }
        let p = Self { x, z, t: a.ln() };
        p.check_finite()?;
        Ok(p)
    }

    /// The point `(0, 0, a)`.
    pub fn on_axis(alg: &HTypeAlgebra, a: f64) -> Result<Self> {
        Self::new(alg, vec![0.0; alg.m()], vec![0.0; alg.k()], a)
    }

    pub fn from_log(alg: &HTypeAlgebra, x: Vec<f64>, z: Vec<f64>, t: f64) -> Result<Self> {
        check_len(alg.m(), x.len())?;
        check_len(alg.k(), z.len())?;
        let p = Self { x, z, t };
        p.check_finite()?;
        Ok(p)
    }

    /// Parses the flat layout `[X…, Z…, t]`.
    pub fn from_flat(alg: &HTypeAlgebra, v: &[f64]) -> Result<Self> {
        let (m, k) = (alg.m(), alg.k());
        check_len(m + k + 1, v.len())?;
        Self::from_log(alg, v[..m].to_vec(), v[m..m + k].to_vec(), v[m + k])
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v.push(self.t);
        v
    }

    pub fn a(&self) -> f64 {
        self.t.exp()
    }

    fn check_finite(&self) -> Result<()> {
        if self.x.iter().chain(&self.z).all(|v| v.is_finite()) && self.t.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain("non-finite coordinate".into()))
        }
    }
}

impl Serialize for NAPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat = self.to_flat();
        let mut seq = s.serialize_seq(Some(flat.len()))?;
        for v in flat {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

impl BallPoint {
    pub fn radius(&self) -> f64 {
        (norm2(&self.xp) + norm2(&self.zp) + self.lp * self.lp).sqrt()
    }

    /// Parses the layout `[X'…, Z'…, l']`.
    pub fn from_flat(alg: &HTypeAlgebra, v: &[f64]) -> Result<Self> {
        let (m, k) = (alg.m(), alg.k());
        check_len(m + k + 1, v.len())?;
        Ok(Self {
            xp: v[..m].to_vec(),
            zp: v[m..m + k].to_vec(),
            lp: v[m + k],
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.xp.clone();
        v.extend_from_slice(&self.zp);
        v.push(self.lp);
        v
    }
}

fn check_point(alg: &HTypeAlgebra, p: &NAPoint) -> Result<()> {
    check_len(alg.m(), p.x.len())?;
    check_len(alg.k(), p.z.len())
}

/// `(X, Z, a)(X', Z', a') = (X + a^{1/2}X', Z + aZ' + ½a^{1/2}[X, X'], aa')`.
pub fn multiply(alg: &HTypeAlgebra, p: &NAPoint, q: &NAPoint) -> Result<NAPoint> {
    check_point(alg, p)?;
    check_point(alg, q)?;
    Ok(multiply_unchecked(alg, p, q))
}

pub(crate) fn multiply_unchecked(alg: &HTypeAlgebra, p: &NAPoint, q: &NAPoint) -> NAPoint {
    let a = p.a();
    let sa = (0.5 * p.t).exp();
    let br = alg.bracket_unchecked(&p.x, &q.x);
    NAPoint {
        x: p.x.iter().zip(&q.x).map(|(x, y)| x + sa * y).collect(),
        z: (0..alg.k()).map(|i| p.z[i] + a * q.z[i] + 0.5 * sa * br[i]).collect(),
        t: p.t + q.t,
    }
}

pub fn inverse(alg: &HTypeAlgebra, p: &NAPoint) -> Result<NAPoint> {
    check_point(alg, p)?;
    Ok(inverse_unchecked(p))
}

pub(crate) fn inverse_unchecked(p: &NAPoint) -> NAPoint {
    let s = (-0.5 * p.t).exp();
    let ia = (-p.t).exp();
    NAPoint {
        x: p.x.iter().map(|x| -s * x).collect(),
        z: p.z.iter().map(|z| -ia * z).collect(),
        t: -p.t,
    }
}

/// `cosh²(r/2)` for the point `(X, Z, a)`.
pub fn cosh2_half_distance(p: &NAPoint) -> f64 {
    let a = p.a();
    let w = 1.0 + a + 0.25 * norm2(&p.x);
    0.25 * (w * w + norm2(&p.z)) / a
}

/// Geodesic distance `d(p, e)`.
pub fn distance_to_origin(alg: &HTypeAlgebra, p: &NAPoint) -> Result<f64> {
    check_point(alg, p)?;
    Ok(distance_to_origin_unchecked(p))
}

pub(crate) fn distance_to_origin_unchecked(p: &NAPoint) -> f64 {
    // With a = e^t, cosh²(r/2) - 1 = sinh²(r/2) is evaluated without cancellation:
    // 4a sinh² = (1 - a)² + |X|²(1 + a)/2 + |X|⁴/16 + |Z|².
    let a = p.a();
    let x2 = norm2(&p.x);
    let am1 = (p.t).exp_m1();
    let s2 = (am1 * am1 + 0.5 * x2 * (1.0 + a) + x2 * x2 / 16.0 + norm2(&p.z)) / (4.0 * a);
    2.0 * s2.sqrt().asinh()
}

pub fn distance(alg: &HTypeAlgebra, p: &NAPoint, q: &NAPoint) -> Result<f64> {
    check_point(alg, p)?;
    check_point(alg, q)?;
    Ok(distance_to_origin_unchecked(&multiply_unchecked(alg, &inverse_unchecked(p), q)))
}

/// Cayley transform onto the unit ball.
pub fn cayley(alg: &HTypeAlgebra, p: &NAPoint) -> Result<BallPoint> {
    check_point(alg, p)?;
    let a = p.a();
    let w = 1.0 + a + 0.25 * norm2(&p.x);
    let d = w * w + norm2(&p.z);
    let jx = alg.apply_jz_unchecked(&p.z, &p.x);
    Ok(BallPoint {
        xp: p.x.iter().zip(&jx).map(|(x, j)| (w * x - j) / d).collect(),
        zp: p.z.iter().map(|z| 2.0 * z / d).collect(),
        lp: 1.0 - 2.0 * w / d,
    })
}

/// Inverse of [`cayley`].
pub fn cayley_inverse(alg: &HTypeAlgebra, b: &BallPoint) -> Result<NAPoint> {
    check_len(alg.m(), b.xp.len())?;
    check_len(alg.k(), b.zp.len())?;
    let rho = b.radius();
    if !(rho < 1.0) {
        return Err(Error::OutsideBall(rho));
    }
    let one_l = 1.0 - b.lp;
    let d = 4.0 / (one_l * one_l + norm2(&b.zp));
    let u = one_l * d / 2.0;
    let z: Vec<f64> = b.zp.iter().map(|v| d * v / 2.0).collect();
    let jx = alg.apply_jz_unchecked(&z, &b.xp);
    let x: Vec<f64> = b.xp.iter().zip(&jx).map(|(xp, j)| u * xp + j).collect();
    // a = u - 1 - |X|²/4 equals (1 - ρ²)D/4, which stays accurate near the boundary.
    let a = (1.0 - rho * rho) * d / 4.0;
    Ok(NAPoint { x, z, t: a.ln() })
}

/// Point of the geodesic sphere `S_r` in direction `omega ∈ S^{n-1}`
/// (ordered as `(X', Z', l')`).
pub fn sphere_point(alg: &HTypeAlgebra, r: f64, omega: &[f64]) -> Result<NAPoint> {
    let rho = (0.5 * r).tanh();
    let mut v: Vec<f64> = omega.iter().map(|w| rho * w).collect();
    let lp = v.pop().unwrap_or(0.0);
    let zp = v.split_off(alg.m());
    cayley_inverse(alg, &BallPoint { xp: v, zp, lp })
}

/// Geodesic inversion `σ`.
pub fn geodesic_inversion(alg: &HTypeAlgebra, p: &NAPoint) -> Result<NAPoint> {
    check_point(alg, p)?;
    let a = p.a();
    let s = a + 0.25 * norm2(&p.x);
    let d = s * s + norm2(&p.z);
    let jx = alg.apply_jz_unchecked(&p.z, &p.x);
    Ok(NAPoint {
        x: p.x.iter().zip(&jx).map(|(x, j)| (-s * x + j) / d).collect(),
        z: p.z.iter().map(|z| -z / d).collect(),
        t: p.t - d.ln(),
    })
}

/// Index of a left-invariant field: `0 ↦ 𝕏_0 = a∂_a`, `1..=m ↦ 𝕏_ℓ`,
/// `m+1..=m+k ↦ 𝕏_{m+i} = a∂_{Z_i}`.
pub type FieldIndex = usize;

/// Direction (in `(X, Z, t)` coordinates) and scale of a left-invariant field.
fn field_direction(alg: &HTypeAlgebra, p: &NAPoint, j: FieldIndex) -> Result<(Vec<f64>, f64)> {
    let (m, k) = (alg.m(), alg.k());
    let mut dir = vec![0.0; m + k + 1];
    let scale = if j == 0 {
        dir[m + k] = 1.0;
        1.0
    } else if j <= m {
        dir[j - 1] = 1.0;
        let mut e = vec![0.0; m];
        e[j - 1] = 1.0;
        let br = alg.bracket_unchecked(&p.x, &e);
        for i in 0..k {
            dir[m + i] = 0.5 * br[i];
        }
        (0.5 * p.t).exp()
    } else if j <= m + k {
        dir[j - 1] = 1.0;
        p.a()
    } else {
        return Err(Error::InvalidArgument(format!("field index {j} out of range")));
    };
    Ok((dir, scale))
}

/// `𝕏_J f(p)` by nested central differences with step `h` for each order.
pub fn left_invariant_derivative_with_step(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    p: &NAPoint,
    multi: &[FieldIndex],
    h: f64,
) -> Result<f64> {
    check_point(alg, p)?;
    let Some((&first, rest)) = multi.split_first() else {
        return Ok(f(p));
    };
    let (dir, scale) = field_direction(alg, p, first)?;
    let base = p.to_flat();
    let shift = |s: f64| -> Result<NAPoint> {
        let v: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + s * d).collect();
        NAPoint::from_flat(alg, &v)
    };
    let (pp, pm) = (shift(h)?, shift(-h)?);
    if pp == *p || pm == *p {
        return Err(Error::StepUnderflow(h));
    }
    let fp = left_invariant_derivative_with_step(alg, f, &pp, rest, h)?;
    let fm = left_invariant_derivative_with_step(alg, f, &pm, rest, h)?;
    Ok(scale * (fp - fm) / (2.0 * h))
}

/// `𝕏_J f(p)` for `|J| ≤ 3` with an order-dependent step
/// `ε^{1/(|J|+2)}·(1 + max|coord|)`.
pub fn left_invariant_derivative(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    p: &NAPoint,
    multi: &[FieldIndex],
) -> Result<f64> {
    if multi.len() > 3 {
        return Err(Error::InvalidArgument("multi-index order above 3".into()));
    }
    let scale = 1.0 + p.to_flat().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let h = f64::EPSILON.powf(1.0 / (multi.len() as f64 + 2.0)) * scale;
    left_invariant_derivative_with_step(alg, f, p, multi, h)
}

/// `d/ds f(p · exp(sY))` at `s = 0` for the basis field `Y = j`.
pub fn curve_derivative(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    p: &NAPoint,
    j: FieldIndex,
    h: f64,
) -> Result<f64> {
    let (m, k) = (alg.m(), alg.k());
    let exp = |s: f64| -> Result<NAPoint> {
        let mut e = NAPoint::identity(alg);
        match j {
            0 => e.t = s,
            j if j <= m => e.x[j - 1] = s,
            j if j <= m + k => e.z[j - m - 1] = s,
            _ => return Err(Error::InvalidArgument(format!("field index {j} out of range"))),
        }
        Ok(e)
    };
    let fp = f(&multiply(alg, p, &exp(h)?)?);
    let fm = f(&multiply(alg, p, &exp(-h)?)?);
    Ok((fp - fm) / (2.0 * h))
}

/// Density of the left Haar measure against `dX dZ dt`.
pub fn haar_weight(alg: &HTypeAlgebra, p: &NAPoint) -> f64 {
    (-alg.q() * p.t).exp()
}

/// Average of `f` over the geodesic sphere through `p`.
pub fn radialize(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    p: &NAPoint,
    sphere: &SphereRule,
) -> Result<f64> {
    check_len(alg.n(), sphere.dim())?;
    let r = distance_to_origin(alg, p)?;
    sphere_mean(alg, f, r, sphere)
}

/// Average of `f` over `S_r` for a rule on `S^{n-1}`.
pub fn sphere_mean(alg: &HTypeAlgebra, f: &dyn Fn(&NAPoint) -> f64, r: f64, sphere: &SphereRule) -> Result<f64> {
    check_len(alg.n(), sphere.dim())?;
    let mut acc = 0.0;
    for (omega, w) in sphere.iter() {
        acc += w * f(&sphere_point(alg, r, omega)?);
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::Quadrature("non-finite sphere average".into()))
    }
}

/// The `v`-radial projector: average of `f(|X|ω, Z, a)` over `ω ∈ S^{m-1}`.
pub fn v_radial_project(
    alg: &HTypeAlgebra,
    f: &dyn Fn(&NAPoint) -> f64,
    p: &NAPoint,
    sphere: &SphereRule,
) -> Result<f64> {
    check_point(alg, p)?;
    check_len(alg.m(), sphere.dim())?;
    let u = norm2(&p.x).sqrt();
    let mut q = p.clone();
    let mut acc = 0.0;
    for (omega, w) in sphere.iter() {
        q.x.iter_mut().zip(omega).for_each(|(x, o)| *x = u * o);
        acc += w * f(&q);
    }
    Ok(acc)
}

/// Bounds from the ball estimate: for `d(p, e) ≤ R`,
/// `e^{-R} ≤ a ≤ e^R`, `|X| ≤ √8 cosh^{1/2}(R/2) e^{R/4}` and
/// `|Z| ≤ 2 cosh(R/2) e^{R/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallBounds {
    pub t_max: f64,
    pub x_max: f64,
    pub z_max: f64,
}

pub fn ball_bounds(r: f64) -> BallBounds {
    let c = (0.5 * r).cosh();
    BallBounds {
        t_max: r,
        x_max: (8.0 * c).sqrt() * (0.25 * r).exp(),
        z_max: 2.0 * c * (0.5 * r).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::build_htype;
    use approx::assert_abs_diff_eq;

    fn alg() -> HTypeAlgebra {
        build_htype(1, 1).unwrap()
    }

    #[test]
    fn n_group_law() {
        let g = alg();
        let p = NAPoint::new(&g, vec![1.0, 2.0], vec![0.0], 1.0).unwrap();
        let q = NAPoint::new(&g, vec![-0.5, 3.0], vec![0.0], 1.0).unwrap();
        let pq = multiply(&g, &p, &q).unwrap();
        // [X, X'] = <J X, X'> with J(1,2) = (-2,1): -2·(-0.5) + 1·3 = 4
        assert_eq!(pq.x, vec![0.5, 5.0]);
        assert_eq!(pq.z, vec![2.0]);
        assert_eq!(pq.t, 0.0);
    }

    #[test]
    fn identity_and_inverse() {
        let g = alg();
        let p = NAPoint::new(&g, vec![0.3, -1.2], vec![0.7], 2.5).unwrap();
        let e = NAPoint::identity(&g);
        assert_eq!(multiply(&g, &p, &e).unwrap(), p);
        assert_eq!(inverse(&g, &e).unwrap(), e);
        let pi = inverse(&g, &p).unwrap();
        let r = multiply(&g, &p, &pi).unwrap();
        for v in r.to_flat() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        let ax = NAPoint::on_axis(&g, 3.0).unwrap();
        assert_abs_diff_eq!(inverse(&g, &ax).unwrap().a(), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn axis_distance_cayley_inversion() {
        let g = alg();
        for a in [0.2, 1.0, 3.7] {
            let p = NAPoint::on_axis(&g, a).unwrap();
            assert_abs_diff_eq!(distance_to_origin(&g, &p).unwrap(), a.ln().abs(), epsilon = 1e-14);
            let b = cayley(&g, &p).unwrap();
            assert_abs_diff_eq!(b.lp, (a - 1.0) / (a + 1.0), epsilon = 1e-15);
            assert_abs_diff_eq!(b.radius(), (0.5 * a.ln().abs()).tanh(), epsilon = 1e-15);
            assert_abs_diff_eq!(geodesic_inversion(&g, &p).unwrap().a(), 1.0 / a, epsilon = 1e-14);
        }
        let rho = 0.6;
        let back = cayley_inverse(&g, &BallPoint { xp: vec![0.0; 2], zp: vec![0.0], lp: rho }).unwrap();
        assert_abs_diff_eq!(back.a(), (1.0 + rho) / (1.0 - rho), epsilon = 1e-13);
        assert_eq!(distance_to_origin(&g, &NAPoint::identity(&g)).unwrap(), 0.0);
        let origin = cayley(&g, &NAPoint::identity(&g)).unwrap();
        assert_eq!(origin.radius(), 0.0);
        assert!(matches!(
            cayley_inverse(&g, &BallPoint { xp: vec![1.0, 0.0], zp: vec![0.0], lp: 0.0 }),
            Err(Error::OutsideBall(_))
        ));
    }

    #[test]
    fn field_examples() {
        let g = alg();
        let p = NAPoint::new(&g, vec![0.4, -0.3], vec![1.1], 1.7).unwrap();
        let log_a = |q: &NAPoint| q.t;
        assert_abs_diff_eq!(left_invariant_derivative(&g, &log_a, &p, &[0]).unwrap(), 1.0, epsilon = 1e-9);
        let z1 = |q: &NAPoint| q.z[0];
        assert_abs_diff_eq!(left_invariant_derivative(&g, &z1, &p, &[3]).unwrap(), 1.7, epsilon = 1e-9);
        assert!(left_invariant_derivative(&g, &z1, &p, &[4]).is_err());
    }

    #[test]
    fn haar_examples() {
        let g = alg();
        assert_eq!(haar_weight(&g, &NAPoint::identity(&g)), 1.0);
        let p = NAPoint::on_axis(&g, std::f64::consts::E).unwrap();
        assert_abs_diff_eq!(haar_weight(&g, &p), (-2f64).exp(), epsilon = 1e-16);
    }

    #[test]
    fn projectors() {
        let g = alg();
        let sph_m = SphereRule::new(2, 64, 1).unwrap();
        let p = NAPoint::new(&g, vec![0.4, -0.3], vec![1.1], 1.7).unwrap();
        let odd = |q: &NAPoint| q.x[0];
        assert_abs_diff_eq!(v_radial_project(&g, &odd, &p, &sph_m).unwrap(), 0.0, epsilon = 1e-14);
        let rad = |q: &NAPoint| (q.x[0] * q.x[0] + q.x[1] * q.x[1]).sqrt() + q.z[0];
        assert_abs_diff_eq!(v_radial_project(&g, &rad, &p, &sph_m).unwrap(), rad(&p), epsilon = 1e-14);
        let sph = SphereRule::new(4, 4000, 1).unwrap();
        let radial = |q: &NAPoint| distance_to_origin_unchecked(q).cos();
        assert_abs_diff_eq!(radialize(&g, &radial, &p, &sph).unwrap(), radial(&p), epsilon = 1e-12);
    }

    #[test]
    fn serialization_layout() {
        let g = alg();
        let p = NAPoint::from_log(&g, vec![1.0, 2.0], vec![3.0], 0.5).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1.0,2.0,3.0,0.5]");
        assert_eq!(NAPoint::from_flat(&g, &p.to_flat()).unwrap(), p);
        assert!(NAPoint::from_flat(&g, &[1.0]).is_err());
    }
}
