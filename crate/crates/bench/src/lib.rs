//! Benchmark fixtures shared by the criterion targets.

use bellforge_core::{ComplexScalar, TensorOperator};

/// Deterministic dense Hermitian test matrix on `dims`.
pub fn hermitian_fixture(dims: Vec<usize>) -> TensorOperator {
    TensorOperator::from_fn(dims, |r, c| {
        let x = ((r * 31 + c * 17) % 97) as f64 / 97.0 - 0.5;
        let y = ((r * 13 + c * 29) % 89) as f64 / 89.0 - 0.5;
        ComplexScalar::new(x, y)
    })
    .expect("finite entries")
    .symmetrized()
}
