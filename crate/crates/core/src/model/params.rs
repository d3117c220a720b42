use crate::model::coupling::{CouplingMatrix, CouplingSpec};
use crate::rng::Stream;
use crate::{Error, Result};

/// Default upper bound on the qubit count (dense 2^14 matrices are ~4 GB).
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// How the Larmor frequencies `ω_k` vary along the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldProfile {
    /// `ω_k = ω_0 + a k`.
    ConstantGradient { a: f64 },
    /// `ω_k` uniform in `(ν - Δ/2, ν + Δ/2)`, drawn once from `seed`.
    Homogeneous { spread: f64, seed: u64 },
    /// `ω_k = ω_0 + b k²`.
    QuadraticGradient { b: f64 },
}

impl FieldProfile {
    pub fn name(&self) -> &'static str {
        match self {
            FieldProfile::ConstantGradient { .. } => "gradient",
            FieldProfile::Homogeneous { .. } => "homogeneous",
            FieldProfile::QuadraticGradient { .. } => "quadratic",
        }
    }

    /// The linear gradient `a`, zero for the other profiles.
    pub fn gradient(&self) -> f64 {
        match *self {
            FieldProfile::ConstantGradient { a } => a,
            _ => 0.0,
        }
    }
}

/// Unvalidated parameter record; [`make_params`] turns it into [`ModelParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct RawParams {
    pub qubits: usize,
    pub omega: f64,
    pub omega0: f64,
    /// Rotating-frame frequency; `None` means `ν = ω_0`.
    pub nu: Option<f64>,
    pub profile: FieldProfile,
    pub coupling: CouplingSpec,
    pub max_qubits: usize,
}

impl Default for RawParams {
    fn default() -> Self {
        Self {
            qubits: 10,
            omega: 100.0,
            omega0: 100.0,
            nu: None,
            profile: FieldProfile::ConstantGradient { a: 1.0 },
            coupling: CouplingSpec::default(),
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl RawParams {
    /// Nearest-neighbour chain with a linear gradient, `ν = ω_0`.
    pub fn gradient_chain(qubits: usize, omega: f64, a: f64, j: f64) -> Self {
        Self {
            qubits,
            omega,
            profile: FieldProfile::ConstantGradient { a },
            coupling: CouplingSpec::uniform(crate::model::CouplingKind::N, j),
            ..Self::default()
        }
    }

    pub fn with_coupling(mut self, coupling: CouplingSpec) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_profile(mut self, profile: FieldProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn build(&self) -> Result<ModelParams> {
        make_params(self)
    }
}

/// Validated physical configuration with materialized detunings and bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    raw: RawParams,
    nu: f64,
    detunings: Vec<f64>,
    bonds: CouplingMatrix,
}

impl ModelParams {
    pub fn qubits(&self) -> usize {
        self.raw.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.raw.qubits
    }

    pub fn omega(&self) -> f64 {
        self.raw.omega
    }

    pub fn omega0(&self) -> f64 {
        self.raw.omega0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn profile(&self) -> &FieldProfile {
        &self.raw.profile
    }

    pub fn coupling(&self) -> &CouplingSpec {
        &self.raw.coupling
    }

    /// `δ_k = ω_k - ν`.
    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn bonds(&self) -> &CouplingMatrix {
        &self.bonds
    }

    pub fn raw(&self) -> &RawParams {
        &self.raw
    }
}

pub fn make_params(raw: &RawParams) -> Result<ModelParams> {
    let l = raw.qubits;
    if l < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 qubits, got {l}")));
    }
    if l > raw.max_qubits {
        return Err(Error::DimensionTooLarge {
            qubits: l,
            max: raw.max_qubits,
        });
    }
    if l >= usize::BITS as usize - 1 {
        return Err(Error::DimensionTooLarge {
            qubits: l,
            max: usize::BITS as usize - 2,
        });
    }
    if !(raw.omega.is_finite() && raw.omega > 0.0) {
        return Err(Error::InvalidParams(format!("omega must be positive and finite, got {}", raw.omega)));
    }
    finite("omega0", raw.omega0)?;
    let nu = raw.nu.unwrap_or(raw.omega0);
    finite("nu", nu)?;

    let detunings: Vec<f64> = match raw.profile {
        FieldProfile::ConstantGradient { a } => {
            finite("a", a)?;
            (0..l).map(|k| raw.omega0 + a * k as f64 - nu).collect()
        }
        FieldProfile::QuadraticGradient { b } => {
            finite("b", b)?;
            (0..l).map(|k| raw.omega0 + b * (k * k) as f64 - nu).collect()
        }
        FieldProfile::Homogeneous { spread, seed } => {
            if !(spread.is_finite() && spread >= 0.0) {
                return Err(Error::InvalidParams(format!("spread must be finite and >= 0, got {spread}")));
            }
            let mut s = Stream::new(seed);
            (0..l).map(|_| spread * (s.uniform() - 0.5)).collect()
        }
    };
    let bonds = CouplingMatrix::build(&raw.coupling, l)?;
    Ok(ModelParams {
        raw: raw.clone(),
        nu,
        detunings,
        bonds,
    })
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be finite, got {v}")))
    }
}
