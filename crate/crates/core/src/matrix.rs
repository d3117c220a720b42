//! Dense complex Hermitian operators on the `2^L`-dimensional chain space.

use std::io::Write;

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// A 2x2 complex matrix `[[m00, m01], [m10, m11]]` acting on one qubit.
pub type Local2 = [[C64; 2]; 2];

/// Dense row-major complex matrix that is Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(d, 0.0);
        }
        m
    }

    /// Wrap row-major data, rejecting input that is not Hermitian to
    /// `1e-12 * max|H|`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidParams(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = Self { dim, data };
        m.check_hermitian(1e-12)?;
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(dim, data)
    }

    pub(crate) fn from_row_major_unchecked(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    /// Set `(i, j)` to `v` and `(j, i)` to `conj(v)`.
    #[inline]
    pub fn set_pair(&mut self, i: usize, j: usize, v: C64) {
        if i == j {
            self.data[i * self.dim + i] = C64::new(v.re, 0.0);
        } else {
            self.data[i * self.dim + j] = v;
            self.data[j * self.dim + i] = v.conj();
        }
    }

    #[inline]
    pub(crate) fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |H - H^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Fails with [`Error::NotHermitian`] when the defect exceeds
    /// `rel * max|H|` (absolute `rel` for the zero matrix).
    pub fn check_hermitian(&self, rel: f64) -> Result<()> {
        let tolerance = rel * self.max_abs().max(1.0);
        let defect = self.hermiticity_defect();
        if defect > tolerance || !defect.is_finite() {
            return Err(Error::NotHermitian {
                dim: self.dim,
                defect,
                tolerance,
            });
        }
        Ok(())
    }

    /// `max |A - B|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b * s)
            .collect();
        Self::from_row_major_unchecked(self.dim, data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Copy with the diagonal set to zero.
    pub fn off_diagonal(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] = ZERO;
        }
        m
    }

    /// Number of entries with `|H_ij| > threshold`, `j > i`.
    pub fn upper_nonzeros(&self, threshold: f64) -> usize {
        let n = self.dim;
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.get(i, j).norm() > threshold).count())
            .sum()
    }

    /// Replace `H` by `G^dagger H G`, where `G` acts as `u` on the qubit
    /// stored in bit `qubit` of the basis index and as identity elsewhere.
    pub fn conjugate_local(&mut self, qubit: usize, u: &Local2) {
        let n = self.dim;
        let bit = 1usize << qubit;
        assert!(bit < n, "qubit {qubit} outside a space of dimension {n}");
        let ud = adjoint(u);
        // rows: H <- G^dagger H
        for i0 in (0..n).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            for j in 0..n {
                let r0 = self.data[i0 * n + j];
                let r1 = self.data[i1 * n + j];
                self.data[i0 * n + j] = ud[0][0] * r0 + ud[0][1] * r1;
                self.data[i1 * n + j] = ud[1][0] * r0 + ud[1][1] * r1;
            }
        }
        // columns: H <- H G
        for i in 0..n {
            let row = &mut self.data[i * n..(i + 1) * n];
            for j0 in (0..n).filter(|j| j & bit == 0) {
                let j1 = j0 | bit;
                let c0 = row[j0];
                let c1 = row[j1];
                row[j0] = c0 * u[0][0] + c1 * u[1][0];
                row[j1] = c0 * u[0][1] + c1 * u[1][1];
            }
        }
    }

    /// Entries with modulus above `threshold` as `(row, col, value)`.
    pub fn triplets(&self, threshold: f64) -> Vec<(usize, usize, C64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                if v.norm() > threshold {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Write `row col re im` lines for every entry above `threshold`.
    pub fn write_triplets<W: Write>(&self, mut w: W, threshold: f64) -> std::io::Result<()> {
        for (i, j, v) in self.triplets(threshold) {
            writeln!(w, "{i} {j} {:.16e} {:.16e}", v.re, v.im)?;
        }
        Ok(())
    }
}

pub fn adjoint(u: &Local2) -> Local2 {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

/// Apply `u` to bit `qubit` of a state vector, in place.
pub fn apply_local(v: &mut [C64], qubit: usize, u: &Local2) {
    let bit = 1usize << qubit;
    for i0 in (0..v.len()).filter(|i| i & bit == 0) {
        let i1 = i0 | bit;
        let (a, b) = (v[i0], v[i1]);
        v[i0] = u[0][0] * a + u[0][1] * b;
        v[i1] = u[1][0] * a + u[1][1] * b;
    }
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian_data() {
        let err = HermitianMatrix::from_row_major(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(2.0, 0.0)]);
        assert!(matches!(err, Err(Error::NotHermitian { .. })));
        let ok = HermitianMatrix::from_row_major(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        assert!(ok.is_ok());
    }

    #[test]
    fn local_conjugation_matches_dense_product() {
        // G = u on qubit 1 of a 2-qubit space; check G^dagger H G against a
        // dense product.
        let h = HermitianMatrix::from_fn(4, |i, j| {
            let x = (i * 7 + j * 3) as f64;
            if i == j {
                c(x, 0.0)
            } else if i < j {
                c(x.sin(), x.cos())
            } else {
                c(((j * 7 + i * 3) as f64).sin(), -((j * 7 + i * 3) as f64).cos())
            }
        })
        .unwrap();
        let s = 0.5f64.sqrt();
        let u: Local2 = [[c(s, 0.0), c(0.0, -s)], [c(0.0, -s), c(s, 0.0)]];
        let mut g = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i & 1 == j & 1 {
                    g[i][j] = u[(i >> 1) & 1][(j >> 1) & 1];
                }
            }
        }
        let mut expect = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        expect[i][j] += g[k][i].conj() * h.get(k, l) * g[l][j];
                    }
                }
            }
        }
        let mut got = h.clone();
        got.conjugate_local(1, &u);
        for i in 0..4 {
            for j in 0..4 {
                assert!((got.get(i, j) - expect[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn triplet_dump_lists_entries_above_threshold() {
        let mut h = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        h.set_pair(1, 0, c(0.0, 0.5));
        let mut out = Vec::new();
        h.write_triplets(&mut out, 1e-6).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0 1 0.0000000000000000e0 -5.0000000000000000e-1");
        assert_eq!(lines[2], "1 0 0.0000000000000000e0 5.0000000000000000e-1");
    }
}
