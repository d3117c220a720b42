//! Parameters, coupling matrices and Hamiltonian construction.
//!
//! Basis convention: qubit `k` is bit `k` of the basis index `s`; bit value
//! 0 is spin up (`I^z = +1/2`). In the mean-field basis bit value 0 is the
//! lower single-qubit level `-ε_k`.

mod coupling;
mod hamiltonian;
mod mean_field;
mod params;

pub use coupling::{CouplingKind, CouplingMatrix, CouplingSpec};
pub use hamiltonian::{
    build_interaction_terms, build_mean_field_hamiltonian, build_quasi_integrable,
    build_z_hamiltonian, spin_z, z_diagonal, InteractionTerms,
};
pub use mean_field::MeanFieldData;
pub use params::{make_params, FieldProfile, ModelParams, RawParams, DEFAULT_MAX_QUBITS};
