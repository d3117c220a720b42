use crate::matrix::{HermitianMatrix, Local2};
use crate::model::{CouplingKind, MeanFieldData, ModelParams};
use crate::{Error, Result, C64};

/// `m_k(s)`: +1/2 when bit `k` of `s` is 0 (spin up), -1/2 otherwise.
#[inline]
pub fn spin_z(s: usize, k: usize) -> f64 {
    if s >> k & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Diagonal of `H_z`: `-Σ_k δ_k m_k - 2 Σ_{k<n} J_{k,n} m_k m_n`.
pub fn z_diagonal(params: &ModelParams) -> Vec<f64> {
    let l = params.qubits();
    let delta = params.detunings();
    let pairs = params.bonds().pairs();
    let j = params.bonds().scale();
    (0..params.dim())
        .map(|s| {
            let field: f64 = (0..l).map(|k| -delta[k] * spin_z(s, k)).sum();
            let ising: f64 = pairs
                .iter()
                .map(|&(k, n, w)| -2.0 * j * w * spin_z(s, k) * spin_z(s, n))
                .sum();
            field + ising
        })
        .collect()
}

/// `H = Σ_k (-δ_k I^z_k + Ω I^y_k) - 2 Σ_{k<n} J_{k,n} I^z_k I^z_n` in the
/// z-basis. Flipping bit `k` from 0 to 1 has amplitude `+iΩ/2`.
pub fn build_z_hamiltonian(params: &ModelParams) -> HermitianMatrix {
    let mut h = HermitianMatrix::from_diagonal(&z_diagonal(params));
    let up = C64::new(0.0, 0.5 * params.omega());
    for s in 0..params.dim() {
        for k in 0..params.qubits() {
            if s >> k & 1 == 0 {
                h.set_pair(s | 1 << k, s, up);
            }
        }
    }
    h
}

/// `U^dagger H_z U`, the Hamiltonian in the mean-field basis.
pub fn build_mean_field_hamiltonian(params: &ModelParams, mf: &MeanFieldData) -> HermitianMatrix {
    mf.rotate(&build_z_hamiltonian(params))
}

/// The interaction `-2 Σ J_{k,n} I^z_k I^z_n` in the mean-field basis, split
/// into three parts (bond strengths included, so for uniform bonds each
/// part is `J` times the corresponding unit operator):
///
/// * `diag`: `-2 Σ J_{k,n} b_k b_n Z_k Z_n`, diagonal;
/// * `band`: `-2 Σ J_{k,n} a_k a_n T_k T_n`, flips two quasi-particles;
/// * `off`: `-2 Σ J_{k,n} (a_k b_n T_k Z_n + b_k a_n Z_k T_n)`, flips one.
///
/// `Z_k = diag(-1/2, 1/2)` and `T_k` is [`MeanFieldData::transverse`].
#[derive(Debug, Clone)]
pub struct InteractionTerms {
    pub diag: HermitianMatrix,
    pub band: HermitianMatrix,
    pub off: HermitianMatrix,
}

impl InteractionTerms {
    pub fn total(&self) -> HermitianMatrix {
        self.diag.add_scaled(&self.band, 1.0).add_scaled(&self.off, 1.0)
    }
}

#[inline]
fn z_mf(s: usize, k: usize) -> f64 {
    if s >> k & 1 == 0 {
        -0.5
    } else {
        0.5
    }
}

#[inline]
fn elem(t: &Local2, to: usize, from: usize, k: usize) -> C64 {
    t[to >> k & 1][from >> k & 1]
}

pub fn build_interaction_terms(params: &ModelParams, mf: &MeanFieldData) -> InteractionTerms {
    let n = params.dim();
    let bonds = params.bonds();
    let pairs = bonds.pairs();
    let t: Vec<Local2> = (0..params.qubits()).map(|k| mf.transverse(k)).collect();
    let (a, b) = (&mf.a_coeffs, &mf.b_coeffs);
    let mut diag = HermitianMatrix::zeros(n);
    let mut band = HermitianMatrix::zeros(n);
    let mut off = HermitianMatrix::zeros(n);
    for s in 0..n {
        for &(k, q, _) in &pairs {
            let c = -2.0 * bonds.get(k, q);
            diag.add_at(s, s, C64::new(c * b[k] * b[q] * z_mf(s, k) * z_mf(s, q), 0.0));

            let to = s ^ (1 << k) ^ (1 << q);
            band.add_at(to, s, elem(&t[k], to, s, k) * elem(&t[q], to, s, q) * (c * a[k] * a[q]));

            let to = s ^ (1 << k);
            off.add_at(to, s, elem(&t[k], to, s, k) * (c * a[k] * b[q] * z_mf(s, q)));
            let to = s ^ (1 << q);
            off.add_at(to, s, elem(&t[q], to, s, q) * (c * b[k] * a[q] * z_mf(s, k)));
        }
    }
    InteractionTerms {
        diag,
        band,
        off,
    }
}

/// `H_a = Σ_k γ_k Z_k - 2 Σ_k J_{k,k+1} T_k T_{k+1}` in the mean-field basis,
/// `γ_k = 2ε_k`: the rotated Hamiltonian with the `b`-weighted interaction
/// dropped and `a_k a_{k+1}` replaced by 1. Nearest-neighbour bonds only.
pub fn build_quasi_integrable(params: &ModelParams, mf: &MeanFieldData) -> Result<HermitianMatrix> {
    let bonds = params.bonds();
    let nearest = match params.coupling().kind {
        CouplingKind::N => true,
        CouplingKind::Custom => bonds.is_nearest_neighbour(),
        _ => false,
    };
    if !nearest {
        return Err(Error::UnsupportedCoupling(params.coupling().kind.to_string()));
    }
    let n = params.dim();
    let t: Vec<Local2> = (0..params.qubits()).map(|k| mf.transverse(k)).collect();
    let mut h = HermitianMatrix::from_diagonal(&mf.unperturbed_energies());
    for s in 0..n {
        for (k, q, _) in bonds.pairs() {
            let to = s ^ (1 << k) ^ (1 << q);
            let v = elem(&t[k], to, s, k) * elem(&t[q], to, s, q) * (-2.0 * bonds.get(k, q));
            h.add_at(to, s, v);
        }
    }
    Ok(h)
}
