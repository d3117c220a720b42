//! Eigenstate structure: participation numbers, index-space widths and the
//! census of directly coupled unperturbed states.

use crate::eigensolve::Spectrum;
use crate::matrix::{norm, HermitianMatrix};
use crate::model::MeanFieldData;
use crate::spectral::{central_band, identify_bands, Band};
use crate::{Error, Result, C64};

const NORM_TOL: f64 = 1e-9;

fn check_norm(state: &[C64]) -> Result<()> {
    let n = norm(state);
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(())
}

/// Number of principal components `N_pc = 1 / Σ_n |ψ_n|⁴`.
pub fn ipr(state: &[C64]) -> Result<f64> {
    check_norm(state)?;
    Ok(1.0 / state.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>())
}

/// `σ = sqrt(Σ n² w_n - (Σ n w_n)²)` with `w_n = |ψ_n|²` and 0-based `n`.
pub fn state_width(state: &[C64]) -> Result<f64> {
    check_norm(state)?;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (n, z) in state.iter().enumerate() {
        let w = z.norm_sqr();
        m1 += n as f64 * w;
        m2 += (n as f64).powi(2) * w;
    }
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Z,
    MeanField,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Z => "z",
            Representation::MeanField => "mean-field",
        }
    }
}

/// Which basis eigenvector components are read in.
#[derive(Debug, Clone, Copy)]
pub enum Basis<'a> {
    /// Components as stored in the spectrum, tagged with their basis.
    AsComputed(Representation),
    /// The spectrum holds z-basis vectors; rotate them with `U^dagger` first.
    ZToMeanField(&'a MeanFieldData),
}

impl Basis<'_> {
    pub fn representation(&self) -> Representation {
        match self {
            Basis::AsComputed(r) => *r,
            Basis::ZToMeanField(_) => Representation::MeanField,
        }
    }

    fn components(&self, v: &[C64]) -> Vec<C64> {
        match self {
            Basis::AsComputed(_) => v.to_vec(),
            Basis::ZToMeanField(mf) => mf.to_mean_field(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRecord {
    pub index: usize,
    pub energy: f64,
    pub npc: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateMetrics {
    pub band: Band,
    pub representation: Representation,
    pub states: Vec<StateRecord>,
    pub mean_npc: f64,
    pub mean_sigma: f64,
}

fn record(spec: &Spectrum, basis: &Basis<'_>, j: usize) -> Result<StateRecord> {
    let v = basis.components(spec.vector(j));
    Ok(StateRecord {
        index: j,
        energy: spec.eigenvalues()[j],
        npc: ipr(&v)?,
        sigma: state_width(&v)?,
    })
}

/// `N_pc` and `σ` of every eigenstate in `band`, with band averages.
pub fn band_metrics(spec: &Spectrum, band: &Band, basis: Basis<'_>) -> Result<EigenstateMetrics> {
    let states = (band.lo_index..=band.hi_index)
        .map(|j| record(spec, &basis, j))
        .collect::<Result<Vec<_>>>()?;
    let n = states.len() as f64;
    Ok(EigenstateMetrics {
        band: *band,
        representation: basis.representation(),
        mean_npc: states.iter().map(|s| s.npc).sum::<f64>() / n,
        mean_sigma: states.iter().map(|s| s.sigma).sum::<f64>() / n,
        states,
    })
}

/// `N_pc` of every eigenstate in ascending energy order.
pub fn npc_profile(spec: &Spectrum, basis: Basis<'_>) -> Result<Vec<StateRecord>> {
    (0..spec.dim()).map(|j| record(spec, &basis, j)).collect()
}

/// Basis states whose unperturbed energy lies in the central band of the
/// unperturbed spectrum (bands split at gaps larger than `Ω/2`).
pub fn central_basis_states(unperturbed: &[f64], omega: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..unperturbed.len()).collect();
    order.sort_by(|&a, &b| unperturbed[a].total_cmp(&unperturbed[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| unperturbed[i]).collect();
    let bands = identify_bands(&sorted, omega);
    if bands.is_empty() {
        return Vec::new();
    }
    let c = central_band(&bands, &sorted);
    let mut states: Vec<usize> = order[c.lo_index..=c.hi_index].to_vec();
    states.sort_unstable();
    states
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    /// Number of central-band basis states.
    pub band_states: usize,
    /// Mean number of above-threshold couplings per central-band row.
    pub m_f: f64,
    /// Largest unperturbed-energy difference of a coupled in-band pair.
    pub delta_e_f: f64,
    /// `(ΔE)_f / M_f`.
    pub d_f: f64,
}

/// Count the off-diagonal couplings of `h_mf` (a Hamiltonian in the
/// mean-field basis) among central-band unperturbed states.
///
/// `unperturbed` are the `J = 0` energies `Σ ±ε_k` of the basis states.
pub fn coupling_census(h_mf: &HermitianMatrix, unperturbed: &[f64], omega: f64, threshold: f64) -> Result<Census> {
    let members = central_basis_states(unperturbed, omega);
    if members.is_empty() {
        return Err(Error::BandTooSmall {
            population: 0,
            required: 1,
        });
    }
    let mut in_band = vec![false; h_mf.dim()];
    for &i in &members {
        in_band[i] = true;
    }
    let mut links = 0usize;
    let mut span: f64 = 0.0;
    for &i in &members {
        let row = h_mf.row(i);
        for &j in &members {
            if j != i && in_band[j] && row[j].norm() > threshold {
                links += 1;
                span = span.max((unperturbed[i] - unperturbed[j]).abs());
            }
        }
    }
    let m_f = links as f64 / members.len() as f64;
    Ok(Census {
        band_states: members.len(),
        m_f,
        delta_e_f: span,
        d_f: if m_f > 0.0 { span / m_f } else { 0.0 },
    })
}
