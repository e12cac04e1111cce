//! Elementary symplectic factors, the product-form decomposition, and gates
//! with signed Pauli conjugation.

mod decompose;
mod elementary;
mod gate;

pub use decompose::{decompose, lower_to_gates, permutation_gates, recompose, Decomposition, DecompositionRecord};
pub use elementary::{diagonal_matrix, partial_hadamard_matrix, permute_matrix, ElementaryFactor};
pub use gate::{conjugate, Gate};
