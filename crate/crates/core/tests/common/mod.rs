#![allow(dead_code)]

use bellforge_core::TensorOperator;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, dims: Vec<usize>) -> TensorOperator {
    TensorOperator::from_fn(dims, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
    .unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dims: Vec<usize>) -> TensorOperator {
    random_matrix(rng, dims).symmetrized()
}

/// `G G† / tr(G G†)`.
pub fn random_density(rng: &mut impl Rng, dims: Vec<usize>) -> TensorOperator {
    let g = random_matrix(rng, dims);
    let p = &g * &g.adjoint();
    let t = p.trace().re;
    p.scale(1.0 / t).symmetrized()
}

pub fn from_entries(dims: Vec<usize>, entries: &[f64]) -> TensorOperator {
    let side: usize = dims.iter().product();
    TensorOperator::from_fn(dims, |r, c| {
        Complex64::new(entries[2 * (r * side + c)], entries[2 * (r * side + c) + 1])
    })
    .unwrap()
}
