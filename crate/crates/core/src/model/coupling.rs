use std::fmt;
use std::str::FromStr;

use crate::rng::Stream;
use crate::{Error, Result};

/// Which qubit pairs carry an Ising bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    /// Nearest neighbours, `|k - n| = 1`.
    N,
    /// Distances 1 and 2.
    NN,
    /// All pairs.
    A,
    /// Explicit symmetric pattern.
    Custom,
}

impl CouplingKind {
    pub fn couples(self, k: usize, n: usize) -> bool {
        let d = k.abs_diff(n);
        match self {
            CouplingKind::N => d == 1,
            CouplingKind::NN => d == 1 || d == 2,
            CouplingKind::A => d > 0,
            CouplingKind::Custom => false,
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::N => "N",
            CouplingKind::NN => "NN",
            CouplingKind::A => "A",
            CouplingKind::Custom => "custom",
        })
    }
}

impl FromStr for CouplingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "n" => Ok(CouplingKind::N),
            "nn" => Ok(CouplingKind::NN),
            "a" => Ok(CouplingKind::A),
            "custom" => Ok(CouplingKind::Custom),
            other => Err(format!("unknown coupling kind `{other}` (expected N, NN, A or custom)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    pub kind: CouplingKind,
    /// Overall scale `J`.
    pub j: f64,
    /// Multiply every populated bond by an independent `ξ ∈ [-1, 1]`.
    pub random: bool,
    pub seed: u64,
    /// Bond pattern for [`CouplingKind::Custom`]; bonds are `J * pattern[k][n]`.
    pub custom: Option<Vec<Vec<f64>>>,
}

impl Default for CouplingSpec {
    fn default() -> Self {
        Self::uniform(CouplingKind::N, 0.0)
    }
}

impl CouplingSpec {
    pub fn uniform(kind: CouplingKind, j: f64) -> Self {
        Self {
            kind,
            j,
            random: false,
            seed: 0,
            custom: None,
        }
    }

    pub fn random(kind: CouplingKind, j: f64, seed: u64) -> Self {
        Self {
            random: true,
            seed,
            ..Self::uniform(kind, j)
        }
    }

    pub fn custom(j: f64, pattern: Vec<Vec<f64>>) -> Self {
        Self {
            custom: Some(pattern),
            ..Self::uniform(CouplingKind::Custom, j)
        }
    }
}

/// Symmetric bond matrix `J_{k,n} = J w_{k,n}` with zero diagonal; `w` holds
/// the pattern (and the random factors `ξ`), `J` the overall scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    scale: f64,
    weights: Vec<Vec<f64>>,
}

impl CouplingMatrix {
    pub fn build(spec: &CouplingSpec, qubits: usize) -> Result<Self> {
        if !spec.j.is_finite() {
            return Err(Error::InvalidParams(format!("J must be finite, got {}", spec.j)));
        }
        let mut w = vec![vec![0.0; qubits]; qubits];
        match spec.kind {
            CouplingKind::Custom => {
                let m = spec.custom.as_ref().ok_or_else(|| {
                    Error::InvalidParams("custom coupling requires an explicit matrix".into())
                })?;
                if m.len() != qubits || m.iter().any(|r| r.len() != qubits) {
                    return Err(Error::InvalidParams(format!(
                        "custom coupling matrix must be {qubits}x{qubits}"
                    )));
                }
                for k in 0..qubits {
                    if m[k][k] != 0.0 {
                        return Err(Error::InvalidParams(format!(
                            "custom coupling matrix has nonzero diagonal at {k}"
                        )));
                    }
                    for n in 0..qubits {
                        if !m[k][n].is_finite() || m[k][n] != m[n][k] {
                            return Err(Error::InvalidParams(format!(
                                "custom coupling matrix is not symmetric at ({k}, {n})"
                            )));
                        }
                        w[k][n] = m[k][n];
                    }
                }
            }
            kind => {
                for k in 0..qubits {
                    for n in k + 1..qubits {
                        if kind.couples(k, n) {
                            w[k][n] = 1.0;
                            w[n][k] = 1.0;
                        }
                    }
                }
            }
        }
        if spec.random {
            let mut s = Stream::new(spec.seed);
            for k in 0..qubits {
                for n in k + 1..qubits {
                    if w[k][n] != 0.0 {
                        let xi = s.symmetric();
                        w[k][n] *= xi;
                        w[n][k] = w[k][n];
                    }
                }
            }
        }
        Ok(Self {
            scale: spec.j,
            weights: w,
        })
    }

    pub fn qubits(&self) -> usize {
        self.weights.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Dimensionless weight `w_{k,n}`.
    pub fn weight(&self, k: usize, n: usize) -> f64 {
        self.weights[k][n]
    }

    /// Bond strength `J_{k,n}`.
    pub fn get(&self, k: usize, n: usize) -> f64 {
        self.scale * self.weights[k][n]
    }

    /// Populated pairs `(k, n, w_{k,n})` with `k < n`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize, f64)> {
        let l = self.qubits();
        let mut out = Vec::new();
        for k in 0..l {
            for n in k + 1..l {
                if self.weights[k][n] != 0.0 {
                    out.push((k, n, self.weights[k][n]));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.weights
            .iter()
            .map(|r| r.iter().map(|w| self.scale * w).collect())
            .collect()
    }

    /// True when only `|k - n| = 1` bonds are populated.
    pub fn is_nearest_neighbour(&self) -> bool {
        self.pairs().iter().all(|&(k, n, _)| n == k + 1)
    }
}
