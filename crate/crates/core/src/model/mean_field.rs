use crate::matrix::{adjoint, apply_local, HermitianMatrix, Local2};
use crate::model::ModelParams;
use crate::C64;

/// Single-qubit quantities of the non-interacting chain.
///
/// Qubit `k` alone has `h_k = -δ_k I^z + Ω I^y` with eigenvalues `±ε_k`,
/// `ε_k = ½√(δ_k² + Ω²)`. `U_k` diagonalizes it with the lower eigenvalue in
/// its first column, so in the rotated basis bit value 0 means energy `-ε_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldData {
    pub epsilons: Vec<f64>,
    pub a_coeffs: Vec<f64>,
    pub b_coeffs: Vec<f64>,
    rotations: Vec<Local2>,
}

impl MeanFieldData {
    pub fn new(params: &ModelParams) -> Self {
        let omega = params.omega();
        let mut epsilons = Vec::new();
        let mut a_coeffs = Vec::new();
        let mut b_coeffs = Vec::new();
        let mut rotations = Vec::new();
        for &d in params.detunings() {
            let gamma = d.hypot(omega);
            epsilons.push(0.5 * gamma);
            a_coeffs.push(omega / gamma);
            b_coeffs.push(-d / gamma);
            rotations.push(diagonalize_2x2(&single_qubit(d, omega)));
        }
        Self {
            epsilons,
            a_coeffs,
            b_coeffs,
            rotations,
        }
    }

    pub fn qubits(&self) -> usize {
        self.epsilons.len()
    }

    pub fn rotation(&self, k: usize) -> &Local2 {
        &self.rotations[k]
    }

    /// `T_k = U_k^dagger (-b_k I^y + a_k I^z) U_k`, the purely off-diagonal
    /// remainder of `U_k^dagger I^z U_k = b_k Z_k + a_k T_k`.
    pub fn transverse(&self, k: usize) -> Local2 {
        let (a, b) = (self.a_coeffs[k], self.b_coeffs[k]);
        let m: Local2 = [
            [C64::new(0.5 * a, 0.0), C64::new(0.0, 0.5 * b)],
            [C64::new(0.0, -0.5 * b), C64::new(-0.5 * a, 0.0)],
        ];
        let u = &self.rotations[k];
        mul2(&adjoint(u), &mul2(&m, u))
    }

    /// Diagonal of `U^dagger H(J=0) U`: `Σ_k ±ε_k`, `+` where bit `k` is 1.
    pub fn unperturbed_energies(&self) -> Vec<f64> {
        let l = self.qubits();
        (0..1usize << l)
            .map(|s| {
                (0..l)
                    .map(|k| if s >> k & 1 == 1 { self.epsilons[k] } else { -self.epsilons[k] })
                    .sum()
            })
            .collect()
    }

    /// `U^dagger H U`.
    pub fn rotate(&self, h: &HermitianMatrix) -> HermitianMatrix {
        let mut out = h.clone();
        for (k, u) in self.rotations.iter().enumerate() {
            out.conjugate_local(k, u);
        }
        out
    }

    /// Components of a z-basis state in the mean-field basis, `U^dagger v`.
    pub fn to_mean_field(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for (k, u) in self.rotations.iter().enumerate() {
            apply_local(&mut out, k, &adjoint(u));
        }
        out
    }

    /// Inverse of [`Self::to_mean_field`], `U v`.
    pub fn to_z(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for (k, u) in self.rotations.iter().enumerate() {
            apply_local(&mut out, k, u);
        }
        out
    }

    /// Dense `U = ⊗_k U_k`, row-major. Intended for checks at small `L`.
    pub fn rotation_matrix(&self) -> Vec<C64> {
        let l = self.qubits();
        let n = 1usize << l;
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut z = C64::new(1.0, 0.0);
                for (k, u) in self.rotations.iter().enumerate() {
                    z *= u[r >> k & 1][c >> k & 1];
                }
                out.push(z);
            }
        }
        out
    }
}

/// `½ [[-δ, -iΩ], [iΩ, δ]]` in the `(up, down)` basis.
fn single_qubit(delta: f64, omega: f64) -> Local2 {
    [
        [C64::new(-0.5 * delta, 0.0), C64::new(0.0, -0.5 * omega)],
        [C64::new(0.0, 0.5 * omega), C64::new(0.5 * delta, 0.0)],
    ]
}

fn mul2(x: &Local2, y: &Local2) -> Local2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// Unitary whose columns are the eigenvectors of a Hermitian 2x2 matrix,
/// ascending eigenvalue, each with its largest component real positive.
pub(crate) fn diagonalize_2x2(h: &Local2) -> Local2 {
    let p = h[0][0].re;
    let r = h[1][1].re;
    let q = h[0][1];
    let mean = 0.5 * (p + r);
    let half = (0.5 * (p - r)).hypot(q.norm());
    if half == 0.0 {
        return [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    }
    let mut cols = [[C64::new(0.0, 0.0); 2]; 2];
    for (c, lambda) in [mean - half, mean + half].into_iter().enumerate() {
        // two algebraically equivalent null vectors of (h - λ); take the
        // better-conditioned one
        let v1 = [q, C64::new(lambda - p, 0.0)];
        let v2 = [C64::new(lambda - r, 0.0), q.conj()];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let (v, nn) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        let big = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
        let phase = big.conj() / big.norm();
        let scale = 1.0 / nn.sqrt();
        cols[c] = [v[0] * phase * scale, v[1] * phase * scale];
    }
    [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
}
