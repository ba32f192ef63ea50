//! Heisenberg-type algebras `n = v ⊕ z` realized through explicit Clifford modules.

use serde::Serialize;

use crate::error::{check_len, Error, Result};

/// An H-type algebra: `k` orthogonal skew maps `J_{u_i}` on `R^m` with
/// `J_{u_i} J_{u_j} + J_{u_j} J_{u_i} = -2 δ_ij I`.
#[derive(Debug, Clone, PartialEq)]
pub struct HTypeAlgebra {
    k: usize,
    m: usize,
    /// Row-major `m × m` matrices, one per basis vector of the center.
    j: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "J")]
    pub j: Vec<Vec<Vec<f64>>>,
}

/// Minimal-module generators as (row, col, sign) triples for `y = J x`.
type Generator = &'static [(usize, usize, f64)];

const COMPLEX: [Generator; 1] = [&[(0, 1, -1.0), (1, 0, 1.0)]];

const QUATERNION: [Generator; 3] = [
    &[(1, 0, 1.0), (0, 1, -1.0), (3, 2, 1.0), (2, 3, -1.0)],
    &[(2, 0, 1.0), (3, 1, -1.0), (0, 2, -1.0), (1, 3, 1.0)],
    &[(3, 0, 1.0), (2, 1, 1.0), (1, 2, -1.0), (0, 3, -1.0)],
];

#[cfg(feature = "octonions")]
const FANO: [(usize, usize, usize); 7] = [
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
];

/// Left multiplication by the imaginary unit `e_i` of the octonions.
#[cfg(feature = "octonions")]
fn octonion_left(i: usize) -> Vec<f64> {
    let mut prod = [[(0usize, 0.0f64); 8]; 8];
    for a in 0..8 {
        prod[0][a] = (a, 1.0);
        prod[a][0] = (a, 1.0);
    }
    for a in 1..8 {
        prod[a][a] = (0, -1.0);
    }
    for &(p, q, r) in &FANO {
        for (x, y, z) in [(p, q, r), (q, r, p), (r, p, q)] {
            prod[x][y] = (z, 1.0);
            prod[y][x] = (z, -1.0);
        }
    }
    let mut mat = vec![0.0; 64];
    for col in 0..8 {
        let (row, s) = prod[i][col];
        mat[row * 8 + col] = s;
    }
    mat
}

fn block_diagonal(block: &[f64], size: usize, copies: usize) -> Vec<f64> {
    let m = size * copies;
    let mut out = vec![0.0; m * m];
    for c in 0..copies {
        for r in 0..size {
            for s in 0..size {
                out[(c * size + r) * m + c * size + s] = block[r * size + s];
            }
        }
    }
    out
}

fn from_generator(g: Generator, size: usize) -> Vec<f64> {
    let mut mat = vec![0.0; size * size];
    for &(r, c, s) in g {
        mat[r * size + c] = s;
    }
    mat
}

/// Builds the H-type algebra with center dimension `k` from `b` copies of the
/// minimal Clifford module.
pub fn build_htype(k: usize, b: usize) -> Result<HTypeAlgebra> {
    if b == 0 {
        return Err(Error::InvalidArgument("module multiplicity b must be positive".into()));
    }
    let (size, blocks): (usize, Vec<Vec<f64>>) = match k {
        1 => (2, vec![from_generator(COMPLEX[0], 2)]),
        2 => (4, QUATERNION[..2].iter().map(|g| from_generator(g, 4)).collect()),
        3 => (4, QUATERNION.iter().map(|g| from_generator(g, 4)).collect()),
        #[cfg(feature = "octonions")]
        7 => (8, (1..8).map(octonion_left).collect()),
        _ => return Err(Error::UnsupportedDimension(k)),
    };
    let j = blocks.iter().map(|blk| block_diagonal(blk, size, b)).collect();
    Ok(HTypeAlgebra { k, m: size * b, j })
}

impl HTypeAlgebra {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of `NA`.
    pub fn n(&self) -> usize {
        self.m + self.k + 1
    }

    /// Homogeneous dimension `m/2 + k`.
    pub fn q(&self) -> f64 {
        self.m as f64 / 2.0 + self.k as f64
    }

    /// Row-major matrix of `J_{u_i}`.
    pub fn j_matrix(&self, i: usize) -> &[f64] {
        &self.j[i]
    }

    fn apply_unit(&self, i: usize, x: &[f64], out: &mut [f64]) {
        let m = self.m;
        let mat = &self.j[i];
        for r in 0..m {
            out[r] = (0..m).map(|c| mat[r * m + c] * x[c]).sum();
        }
    }

    /// `[X, Y]` with components `<J_{u_i} X, Y>`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.m, x.len())?;
        check_len(self.m, y.len())?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut jx = vec![0.0; self.m];
        (0..self.k)
            .map(|i| {
                self.apply_unit(i, x, &mut jx);
                jx.iter().zip(y).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `J_Z X = Σ Z_i J_{u_i} X`.
    pub fn apply_jz(&self, z: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.k, z.len())?;
        check_len(self.m, x.len())?;
        Ok(self.apply_jz_unchecked(z, x))
    }

    pub(crate) fn apply_jz_unchecked(&self, z: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        let mut jx = vec![0.0; self.m];
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0.0 {
                continue;
            }
            self.apply_unit(i, x, &mut jx);
            for (o, v) in out.iter_mut().zip(&jx) {
                *o += zi * v;
            }
        }
        out
    }

    pub fn summary(&self) -> AlgebraSummary {
        let m = self.m;
        AlgebraSummary {
            k: self.k,
            m,
            n: self.n(),
            q: self.q(),
            j: self.j.iter().map(|mat| mat.chunks(m).map(<[f64]>::to_vec).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m * m];
        for r in 0..m {
            for c in 0..m {
                out[r * m + c] = (0..m).map(|s| a[r * m + s] * b[s * m + c]).sum();
            }
        }
        out
    }

    fn all_algebras() -> Vec<HTypeAlgebra> {
        let mut v = Vec::new();
        for k in [1, 2, 3] {
            for b in 1..=3 {
                v.push(build_htype(k, b).unwrap());
            }
        }
        #[cfg(feature = "octonions")]
        v.push(build_htype(7, 1).unwrap());
        v
    }

    #[test]
    fn dimension_table() {
        let rows = [(1, 4, 2), (2, 4, 1), (3, 4, 1), (1, 6, 3), (2, 8, 2), (3, 12, 3)];
        for (k, m, b) in rows {
            let a = build_htype(k, b).unwrap();
            assert_eq!((a.k(), a.m()), (k, m));
        }
        let a = build_htype(1, 1).unwrap();
        assert_eq!(a.n(), 4);
        assert_eq!(a.q(), 2.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(build_htype(4, 1), Err(Error::UnsupportedDimension(4)));
        assert!(matches!(build_htype(1, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn k1_is_counterclockwise_rotation() {
        let a = build_htype(1, 1).unwrap();
        assert_eq!(a.j_matrix(0), &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(a.bracket(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn clifford_relations_exact() {
        for a in all_algebras() {
            let m = a.m();
            for i in 0..a.k() {
                let ji = a.j_matrix(i);
                for r in 0..m {
                    for c in 0..m {
                        assert_eq!(ji[r * m + c], -ji[c * m + r], "skew");
                    }
                }
                for l in 0..a.k() {
                    let jl = a.j_matrix(l);
                    let s1 = matmul(ji, jl, m);
                    let s2 = matmul(jl, ji, m);
                    for r in 0..m {
                        for c in 0..m {
                            let want = if i == l && r == c { -2.0 } else { 0.0 };
                            assert_eq!(s1[r * m + c] + s2[r * m + c], want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = build_htype(3, 1).unwrap();
        assert_eq!(
            a.bracket(&[1.0; 3], &[1.0; 4]),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        );
        assert!(a.apply_jz(&[1.0; 2], &[1.0; 4]).is_err());
        assert_eq!(a.apply_jz(&[0.0; 3], &[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn summary_json_shape() {
        let a = build_htype(1, 1).unwrap();
        let v = serde_json::to_value(a.summary()).unwrap();
        assert_eq!(v["Q"], 2.0);
        assert_eq!(v["n"], 4);
        assert_eq!(v["J"][0], serde_json::json!([[0.0, -1.0], [1.0, 0.0]]));
    }
}
