//! Dense complex operators on tensor-product spaces.
//!
//! A [`TensorOperator`] is a square complex matrix stored row-major together
//! with the ordered list of tensor-factor dimensions it acts on. Basis states
//! are indexed lexicographically: on `[d1, d2, d3]` the product vector
//! `e_a ⊗ e_b ⊗ e_c` has index `(a * d2 + b) * d3 + c`.
//!
//! Factor positions passed to [`TensorOperator::partial_trace`] and
//! [`TensorOperator::embed_identity`] are 1-based, so `partial_trace(1)`
//! traces out the leftmost factor.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Frobenius tolerance for the Hermiticity precondition of the
/// spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct TensorOperator {
    dims: Vec<usize>,
    side: usize,
    data: Vec<Complex64>,
}

impl TensorOperator {
    /// Builds an operator from row-major entries.
    pub fn new(dims: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        let side = side_of(&dims)?;
        if data.len() != side * side {
            return Err(Error::EntryCount {
                side,
                found: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / side,
                col: k % side,
            });
        }
        Ok(Self { dims, side, data })
    }

    pub fn from_real(dims: Vec<usize>, entries: &[f64]) -> Result<Self> {
        Self::new(
            dims,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let side = side_of(&dims)?;
        let mut data = Vec::with_capacity(side * side);
        for r in 0..side {
            for c in 0..side {
                data.push(f(r, c));
            }
        }
        Self::new(dims, data)
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let side = side_of(&dims)?;
        Ok(Self {
            dims,
            side,
            data: vec![ZERO; side * side],
        })
    }

    pub fn identity(dims: Vec<usize>) -> Result<Self> {
        let mut out = Self::zeros(dims)?;
        for k in 0..out.side {
            out.data[k * out.side + k] = ONE;
        }
        Ok(out)
    }

    pub fn diagonal(dims: Vec<usize>, diag: &[f64]) -> Result<Self> {
        let mut out = Self::zeros(dims)?;
        if diag.len() != out.side {
            return Err(Error::EntryCount {
                side: out.side,
                found: diag.len() * diag.len(),
            });
        }
        for (k, &v) in diag.iter().enumerate() {
            out.data[k * out.side + k] = Complex64::new(v, 0.0);
        }
        Ok(out)
    }

    /// `|psi><psi|` for a state vector on the given factors.
    pub fn outer(dims: Vec<usize>, psi: &[Complex64]) -> Result<Self> {
        let side = side_of(&dims)?;
        if psi.len() != side {
            return Err(Error::EntryCount {
                side,
                found: psi.len() * psi.len(),
            });
        }
        Self::from_fn(dims, |r, c| psi[r] * psi[c].conj())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.side + col]
    }

    /// Same entries, different factorization of the same side length.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        let side = side_of(&dims)?;
        if side != self.side {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                found: dims,
            });
        }
        self.dims = dims;
        Ok(self)
    }

    fn ensure_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.clone(),
                found: other.dims.clone(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.ensure_same_dims(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            side: self.side,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            side: self.side,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Matrix product; both operands must carry the same factor dims.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dims(other)?;
        let n = self.side;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (out, &b) in row.iter_mut().zip(other_row) {
                    *out += a * b;
                }
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            side: n,
            data,
        })
    }

    /// Kronecker product `self ⊗ other`; factor dims are concatenated.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.side, other.side);
        let side = n * m;
        let mut data = vec![ZERO; side * side];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    let base = (i * m + k) * side + j * m;
                    for l in 0..m {
                        data[base + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, side, data }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.side;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Self {
            dims: self.dims.clone(),
            side: n,
            data,
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.side).map(|k| self.data[k * self.side + k]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||a - b||_F`; the operands must share factor dims.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        self.ensure_same_dims(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.ensure_same_dims(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `||A - A^dagger||_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.side;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self.data[r * n + c] - self.data[c * n + r].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    /// `(A + A^dagger) / 2`.
    pub fn symmetrized(&self) -> Self {
        let n = self.side;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = (self.data[r * n + c] + self.data[c * n + r].conj()) * 0.5;
            }
        }
        out
    }

    fn check_hermitian(&self, tol: f64) -> Result<()> {
        let asymmetry = self.hermiticity_defect();
        let tolerance = tol * self.frobenius_norm().max(1.0);
        if asymmetry > tolerance {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        Ok(())
    }

    /// Splits the lexicographic index space around factor `position`
    /// (1-based) into `(left, dim, right)` block sizes.
    fn split_at_factor(&self, position: usize) -> Result<(usize, usize, usize)> {
        if position == 0 || position > self.dims.len() {
            return Err(Error::FactorOutOfRange {
                position,
                factors: self.dims.len(),
            });
        }
        let j = position - 1;
        let left = self.dims[..j].iter().product();
        let right = self.dims[j + 1..].iter().product();
        Ok((left, self.dims[j], right))
    }

    /// Traces out the factor at 1-based `position`; the remaining factors
    /// keep their relative order.
    pub fn partial_trace(&self, position: usize) -> Result<Self> {
        if self.dims.len() < 2 {
            return Err(Error::TooFewFactors {
                factors: self.dims.len(),
            });
        }
        let (left, mid, right) = self.split_at_factor(position)?;
        let n = self.side;
        let side = left * right;
        let mut data = vec![ZERO; side * side];
        for a in 0..left {
            for b in 0..right {
                let out_row = a * right + b;
                for a2 in 0..left {
                    for b2 in 0..right {
                        let mut acc = ZERO;
                        for x in 0..mid {
                            let r = (a * mid + x) * right + b;
                            let c = (a2 * mid + x) * right + b2;
                            acc += self.data[r * n + c];
                        }
                        data[out_row * side + a2 * right + b2] = acc;
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(position - 1);
        Ok(Self { dims, side, data })
    }

    /// Inserts an identity factor `I_dim` so that it lands at 1-based
    /// `position` of the result. This is the adjoint of
    /// [`partial_trace`](Self::partial_trace) at the same position.
    pub fn embed_identity(&self, position: usize, dim: usize) -> Result<Self> {
        if position == 0 || position > self.dims.len() + 1 {
            return Err(Error::FactorOutOfRange {
                position,
                factors: self.dims.len() + 1,
            });
        }
        let mut dims = self.dims.clone();
        dims.insert(position - 1, dim);
        let side = side_of(&dims)?;
        let left: usize = self.dims[..position - 1].iter().product();
        let right: usize = self.dims[position - 1..].iter().product();
        let n = self.side;
        let mut data = vec![ZERO; side * side];
        for a in 0..left {
            for b in 0..right {
                for a2 in 0..left {
                    for b2 in 0..right {
                        let v = self.data[(a * right + b) * n + a2 * right + b2];
                        if v == ZERO {
                            continue;
                        }
                        for x in 0..dim {
                            let r = (a * dim + x) * right + b;
                            let c = (a2 * dim + x) * right + b2;
                            data[r * side + c] = v;
                        }
                    }
                }
            }
        }
        Ok(Self { dims, side, data })
    }

    pub fn eig_hermitian(&self) -> Result<Spectrum> {
        self.eig_hermitian_with_tol(HERMITIAN_TOL)
    }

    /// Eigendecomposition of a Hermitian operator, eigenvalues descending.
    pub fn eig_hermitian_with_tol(&self, tol: f64) -> Result<Spectrum> {
        self.check_hermitian(tol)?;
        let sym = self.symmetrized();
        let n = self.side;
        let m = DMatrix::from_row_slice(n, n, &sym.data);
        let eig = SymmetricEigen::try_new(m, 1e-15, 0).ok_or(Error::EigenFailure)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vecs = vec![ZERO; n * n];
        for (col, &k) in order.iter().enumerate() {
            for r in 0..n {
                vecs[r * n + col] = eig.eigenvectors[(r, k)];
            }
        }
        Ok(Spectrum {
            eigenvalues,
            eigenvectors: Self {
                dims: self.dims.clone(),
                side: n,
                data: vecs,
            },
        })
    }

    /// Hermitian sign function with the tie rule `sign(0) = +1`.
    ///
    /// The result is the maximizer of `tr[self · W]` over Hermitian `W`
    /// with operator norm at most one.
    pub fn hermitian_sign(&self) -> Result<Self> {
        Ok(self
            .eig_hermitian()?
            .map_eigenvalues(|l| if l >= 0.0 { 1.0 } else { -1.0 }))
    }

    pub fn operator_norm(&self) -> Result<f64> {
        let s = self.eig_hermitian()?;
        Ok(s.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max))
    }

    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self
            .eig_hermitian()?
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .sum())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self
            .eig_hermitian()?
            .eigenvalues
            .last()
            .expect("operators have at least one eigenvalue"))
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }
}

fn side_of(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidFactorDims {
            dims: dims.to_vec(),
        });
    }
    Ok(dims.iter().product())
}

impl fmt::Debug for TensorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TensorOperator dims={:?}", self.dims)?;
        for r in 0..self.side {
            let row: Vec<String> = (0..self.side)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &TensorOperator {
    type Output = TensorOperator;

    /// Panics on mismatched factor dims; use [`TensorOperator::try_add`]
    /// for a fallible version.
    fn add(self, rhs: Self) -> TensorOperator {
        self.try_add(rhs).expect("operands must share factor dims")
    }
}

impl Sub for &TensorOperator {
    type Output = TensorOperator;

    fn sub(self, rhs: Self) -> TensorOperator {
        self.try_sub(rhs).expect("operands must share factor dims")
    }
}

impl Mul for &TensorOperator {
    type Output = TensorOperator;

    fn mul(self, rhs: Self) -> TensorOperator {
        self.matmul(rhs).expect("operands must share factor dims")
    }
}

impl Mul<f64> for &TensorOperator {
    type Output = TensorOperator;

    fn mul(self, rhs: f64) -> TensorOperator {
        self.scale(rhs)
    }
}

impl Neg for &TensorOperator {
    type Output = TensorOperator;

    fn neg(self) -> TensorOperator {
        self.scale(-1.0)
    }
}

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: TensorOperator,
}

impl Spectrum {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> TensorOperator {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.reconstruct_with(&mapped)
    }

    /// `V · diag(values) · V†` for an arbitrary replacement spectrum.
    pub fn reconstruct_with(&self, values: &[f64]) -> TensorOperator {
        let v = &self.eigenvectors;
        let n = v.side;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in r..n {
                let mut acc = ZERO;
                for (k, &l) in values.iter().enumerate() {
                    if l != 0.0 {
                        acc += v.data[r * n + k] * v.data[c * n + k].conj() * l;
                    }
                }
                data[r * n + c] = acc;
                data[c * n + r] = acc.conj();
            }
        }
        for k in 0..n {
            data[k * n + k].im = 0.0;
        }
        TensorOperator {
            dims: v.dims.clone(),
            side: n,
            data,
        }
    }

    pub fn reconstruct(&self) -> TensorOperator {
        self.reconstruct_with(&self.eigenvalues)
    }

    /// Eigenvector `k` as a column.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.side;
        (0..n).map(|r| self.eigenvectors.data[r * n + k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> TensorOperator {
        TensorOperator::from_real(vec![2], &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn pauli_z() -> TensorOperator {
        TensorOperator::from_real(vec![2], &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(matches!(
            TensorOperator::zeros(vec![2, 0]),
            Err(Error::InvalidFactorDims { .. })
        ));
        assert!(matches!(
            TensorOperator::zeros(vec![]),
            Err(Error::InvalidFactorDims { .. })
        ));
        assert!(matches!(
            TensorOperator::new(vec![2], vec![ZERO; 3]),
            Err(Error::EntryCount { side: 2, found: 3 })
        ));
        assert!(matches!(
            TensorOperator::new(vec![2], vec![ZERO, c(f64::NAN, 0.0), ZERO, ZERO]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = TensorOperator::identity(vec![2]).unwrap();
        let i4 = i2.kron(&i2);
        assert_eq!(i4.dims(), &[2, 2]);
        assert_eq!(i4, TensorOperator::identity(vec![2, 2]).unwrap());
    }

    #[test]
    fn kron_pauli_x_z_entries() {
        let k = pauli_x().kron(&pauli_z());
        let expected = TensorOperator::from_real(
            vec![2, 2],
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, -1.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        for d in 2..=4 {
            let dd = (d * d) as f64;
            let t = TensorOperator::identity(vec![d, d])
                .unwrap()
                .scale(1.0 / dd);
            let expected = TensorOperator::identity(vec![d])
                .unwrap()
                .scale(1.0 / d as f64);
            for j in 1..=2 {
                let r = t.partial_trace(j).unwrap();
                assert!(r.frobenius_distance(&expected).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_errors() {
        let t = TensorOperator::identity(vec![2, 3]).unwrap();
        assert_eq!(
            t.partial_trace(0),
            Err(Error::FactorOutOfRange {
                position: 0,
                factors: 2
            })
        );
        assert_eq!(
            t.partial_trace(3),
            Err(Error::FactorOutOfRange {
                position: 3,
                factors: 2
            })
        );
        let single = TensorOperator::identity(vec![4]).unwrap();
        assert_eq!(
            single.partial_trace(1),
            Err(Error::TooFewFactors { factors: 1 })
        );
    }

    #[test]
    fn partial_trace_respects_unequal_dims() {
        // diag(1,2) ⊗ diag(1,2,3) traced over either side.
        let a = TensorOperator::diagonal(vec![2], &[1.0, 2.0]).unwrap();
        let b = TensorOperator::diagonal(vec![3], &[1.0, 2.0, 3.0]).unwrap();
        let ab = a.kron(&b);
        assert_eq!(ab.partial_trace(2).unwrap(), a.scale(6.0));
        assert_eq!(ab.partial_trace(1).unwrap(), b.scale(3.0));
    }

    #[test]
    fn embed_identity_is_adjoint_of_partial_trace() {
        // <X, tr_j T> = <embed_j X, T> on a fixed non-symmetric example.
        let t = TensorOperator::from_fn(vec![2, 3, 2], c_at).unwrap();
        for (j, dims) in [(1, vec![3, 2]), (2, vec![2, 2]), (3, vec![2, 3])] {
            let x = TensorOperator::from_fn(dims, |r, c| c_at(c + 5, r + 1)).unwrap();
            let lhs = inner(&x, &t.partial_trace(j).unwrap());
            let emb = x.embed_identity(j, t.dims()[j - 1]).unwrap();
            assert_eq!(emb.dims(), t.dims());
            let rhs = inner(&emb, &t);
            assert!((lhs - rhs).norm() < 1e-12, "position {j}");
        }
    }

    fn c_at(r: usize, c: usize) -> Complex64 {
        Complex64::new(
            ((r * 7 + c * 3) % 11) as f64 - 5.0,
            ((r * 5 + c) % 7) as f64 - 3.0,
        )
    }

    fn inner(a: &TensorOperator, b: &TensorOperator) -> Complex64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    #[test]
    fn eig_diagonal_sorted_descending() {
        let t = TensorOperator::diagonal(vec![3], &[3.0, 1.0, 2.0]).unwrap();
        let s = t.eig_hermitian().unwrap();
        for (got, want) in s.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_pauli_x() {
        let s = pauli_x().eig_hermitian().unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let t = TensorOperator::from_real(vec![2], &[0.0, 1.0, 0.0, 0.0]).unwrap();
        match t.eig_hermitian() {
            Err(Error::NotHermitian { asymmetry, .. }) => {
                assert!((asymmetry - 2f64.sqrt()).abs() < 1e-14)
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
        assert!(t.operator_norm().is_err());
        assert!(t.trace_norm().is_err());
        assert!(t.is_psd(1e-10).is_err());
    }

    #[test]
    fn sign_tie_rule_at_zero() {
        let t = TensorOperator::diagonal(vec![3], &[2.0, -0.5, 0.0]).unwrap();
        let s = t.hermitian_sign().unwrap();
        let expected = TensorOperator::diagonal(vec![3], &[1.0, -1.0, 1.0]).unwrap();
        assert!(s.frobenius_distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn norms() {
        assert!((pauli_z().operator_norm().unwrap() - 1.0).abs() < 1e-14);
        let t = TensorOperator::diagonal(vec![2], &[1.0, -2.0]).unwrap();
        assert!((t.trace_norm().unwrap() - 3.0).abs() < 1e-14);
        assert!((t.operator_norm().unwrap() - 2.0).abs() < 1e-14);
        assert!(!t.is_psd(1e-10).unwrap());
        assert!(TensorOperator::identity(vec![3])
            .unwrap()
            .is_psd(0.0)
            .unwrap());
    }

    #[test]
    fn adjoint_and_trace() {
        let t = TensorOperator::new(
            vec![2],
            vec![c(1.0, 2.0), c(3.0, -1.0), c(0.0, 4.0), c(-2.0, 0.5)],
        )
        .unwrap();
        let a = t.adjoint();
        assert_eq!(a.get(0, 1), c(0.0, -4.0));
        assert_eq!(a.get(1, 0), c(3.0, 1.0));
        assert_eq!(t.trace(), c(-1.0, 2.5));
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        let a = TensorOperator::identity(vec![4]).unwrap();
        let b = TensorOperator::identity(vec![2, 2]).unwrap();
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            a.try_add(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.frobenius_distance(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
