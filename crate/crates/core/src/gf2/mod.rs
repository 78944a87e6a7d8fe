//! GF(2) matrices, CNOT gates and the bidirectional synthesis state.

pub mod circuit;
pub mod gate;
pub mod matrix;
pub mod state;

pub use circuit::{circuit_to_matrix, first_mismatch, Circuit};
pub use gate::{cancel_redundant, enumerate_gates, Cnot, CnotGate, Side};
pub use matrix::{random_invertible, random_invertible_with, BitMatrix, GeneratorConfig};
pub use state::{apply_cnot, cost_eq1, cost_eq2, improvement_from_cnot, CostModel, SynthState};

/// Inverse over GF(2); `SingularMatrix` when the rank is below `n`.
pub fn gf2_inverse(m: &BitMatrix) -> crate::Result<BitMatrix> {
    m.inverse()
}
