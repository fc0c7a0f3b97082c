//! Constructors for the flip and antisymmetrizer projections, the Werner
//! state, and the tripartite source operators whose bipartite marginals
//! reproduce it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::TensorOperator;

/// Tolerance used when validating constructed density operators.
pub const DENSITY_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: TensorOperator,
}

impl DensityOperator {
    pub fn new(op: TensorOperator) -> Result<Self> {
        Self::with_tol(op, DENSITY_TOL)
    }

    /// Validates the density-operator invariants at tolerance `tol`.
    /// The stored operator is the symmetrized input.
    pub fn with_tol(op: TensorOperator, tol: f64) -> Result<Self> {
        let spectrum = op.eig_hermitian_with_tol(tol)?;
        let trace = op.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::TraceNotUnit {
                trace,
                tolerance: tol,
            });
        }
        let min_eigenvalue = *spectrum.eigenvalues.last().unwrap();
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue,
                tolerance: tol,
            });
        }
        Ok(Self {
            op: op.symmetrized(),
        })
    }

    pub fn op(&self) -> &TensorOperator {
        &self.op
    }

    pub fn into_inner(self) -> TensorOperator {
        self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }
}

impl AsRef<TensorOperator> for DensityOperator {
    fn as_ref(&self) -> &TensorOperator {
        &self.op
    }
}

/// A permutation of three tensor slots.
///
/// `images[i]` is the (1-based) slot that the vector in slot `i + 1` is
/// moved to by the associated operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation3 {
    images: [usize; 3],
    parity: i8,
}

impl Permutation3 {
    pub const IDENTITY: Self = Self {
        images: [1, 2, 3],
        parity: 1,
    };

    pub fn new(images: [usize; 3]) -> Result<Self> {
        let mut sorted = images;
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(Error::InvalidPermutation { images });
        }
        let mut inversions = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if images[i] > images[j] {
                    inversions += 1;
                }
            }
        }
        Ok(Self {
            images,
            parity: if inversions % 2 == 0 { 1 } else { -1 },
        })
    }

    /// The transposition exchanging slots `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Result<Self> {
        let mut images = [1, 2, 3];
        if !(1..=3).contains(&a) || !(1..=3).contains(&b) || a == b {
            return Err(Error::InvalidPermutation { images: [a, b, 0] });
        }
        images.swap(a - 1, b - 1);
        Self::new(images)
    }

    /// All six elements of S3, identity first.
    pub fn all() -> [Self; 6] {
        [
            [1, 2, 3],
            [2, 1, 3],
            [1, 3, 2],
            [3, 2, 1],
            [2, 3, 1],
            [3, 1, 2],
        ]
        .map(|p| Self::new(p).unwrap())
    }

    pub fn images(&self) -> [usize; 3] {
        self.images
    }

    pub fn parity(&self) -> i8 {
        self.parity
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(other.images.map(|i| self.images[i - 1])).unwrap()
    }
}

fn require_dim(d: usize, min: usize, reason: &'static str) -> Result<()> {
    if d < min {
        return Err(Error::UnsupportedDimension { d, reason });
    }
    Ok(())
}

/// The flip operator `V_d` on `[d, d]`: `e_i ⊗ e_j ↦ e_j ⊗ e_i`.
pub fn flip(d: usize) -> Result<TensorOperator> {
    require_dim(d, 2, "flip requires d >= 2")?;
    TensorOperator::from_fn(vec![d, d], |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `P_d^(-) = (I - V_d) / 2`.
pub fn antisym_projector(d: usize) -> Result<TensorOperator> {
    let v = flip(d)?;
    let i = TensorOperator::identity(vec![d, d])?;
    Ok((&i - &v).scale(0.5))
}

/// The slot-permutation unitary `U_p` on `[d, d, d]`.
pub fn permutation_operator(p: &Permutation3, d: usize) -> Result<TensorOperator> {
    require_dim(d, 2, "permutation operators require d >= 2")?;
    let side = d * d * d;
    let mut data = vec![Complex64::new(0.0, 0.0); side * side];
    for input in 0..side {
        let slots = [input / (d * d), (input / d) % d, input % d];
        let mut moved = [0usize; 3];
        for (i, &target) in p.images.iter().enumerate() {
            moved[target - 1] = slots[i];
        }
        let output = (moved[0] * d + moved[1]) * d + moved[2];
        data[output * side + input] = Complex64::new(1.0, 0.0);
    }
    TensorOperator::new(vec![d, d, d], data)
}

/// Projection `Q_d` onto the totally antisymmetric subspace of
/// `(C^d)^⊗3`: the signed average of the six slot permutations.
/// For `d = 2` this is the zero operator.
pub fn antisymmetrizer3(d: usize) -> Result<TensorOperator> {
    let mut acc = TensorOperator::zeros(vec![d, d, d])?;
    for p in Permutation3::all() {
        let u = permutation_operator(&p, d)?;
        acc = &acc + &u.scale(f64::from(p.parity()));
    }
    Ok(acc.scale(1.0 / 6.0))
}

/// `Q_d` assembled from the six sums of basis outer products
/// `|e_n><e_m|` (identity, three flips, two cyclic chains), independently
/// of [`permutation_operator`].
pub fn antisymmetrizer3_basis_expansion(d: usize) -> Result<TensorOperator> {
    require_dim(d, 2, "antisymmetrizer requires d >= 2")?;
    let unit = |n: usize, m: usize| {
        TensorOperator::from_fn(vec![d], |r, c| {
            Complex64::new(if r == n && c == m { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap()
    };
    let id = TensorOperator::identity(vec![d])?;
    let mut six_q = TensorOperator::identity(vec![d, d, d])?;
    for n in 0..d {
        for m in 0..d {
            let nm = unit(n, m);
            let mn = unit(m, n);
            six_q = &six_q - &nm.kron(&mn).kron(&id);
            six_q = &six_q - &id.kron(&nm).kron(&mn);
            six_q = &six_q - &nm.kron(&id).kron(&mn);
            for k in 0..d {
                six_q = &six_q + &nm.kron(&unit(m, k)).kron(&unit(k, n));
                six_q = &six_q + &unit(m, n).kron(&unit(k, m)).kron(&unit(n, k));
            }
        }
    }
    Ok(six_q.scale(1.0 / 6.0))
}

/// The Werner state `(1/d³) I + (2/d²) P_d^(-)` on `[d, d]`.
pub fn werner(d: usize) -> Result<DensityOperator> {
    require_dim(d, 2, "the Werner state requires d >= 2")?;
    DensityOperator::new(werner_operator(d)?)
}

/// Unvalidated Werner operator, built from the projector form.
fn werner_operator(d: usize) -> Result<TensorOperator> {
    let df = d as f64;
    let i = TensorOperator::identity(vec![d, d])?;
    Ok(&i.scale(1.0 / df.powi(3)) + &antisym_projector(d)?.scale(2.0 / (df * df)))
}

/// The same state from the flip form `((d+1)/d³) I - (1/d²) V_d`.
pub fn werner_flip_form(d: usize) -> Result<TensorOperator> {
    let df = d as f64;
    let i = TensorOperator::identity(vec![d, d])?;
    Ok(&i.scale((df + 1.0) / df.powi(3)) - &flip(d)?.scale(1.0 / (df * df)))
}

/// The two-qubit source operator
/// `(1/4) I - (1/8) V⊗I - (1/8) (I⊗V)(V⊗I)(I⊗V)` on `[2, 2, 2]`,
/// whose marginals over factors 2 and 3 are the two-qubit Werner state.
pub fn dso_two_qubit() -> Result<DensityOperator> {
    let v = flip(2)?;
    let id = TensorOperator::identity(vec![2])?;
    let v12 = v.kron(&id);
    let v23 = id.kron(&v);
    let v13 = &(&v23 * &v12) * &v23;
    let t = &(&TensorOperator::identity(vec![2, 2, 2])?.scale(0.25) - &v12.scale(0.125))
        - &v13.scale(0.125);
    DensityOperator::new(t)
}

/// The symmetric source operator `(1/d⁴) I + 6/(d²(d-2)) Q_d` on
/// `[d, d, d]`, all three of whose bipartite marginals equal the Werner
/// state. Requires `d >= 3`.
pub fn dso_general(d: usize) -> Result<DensityOperator> {
    require_dim(
        d,
        3,
        "the symmetric source operator needs d >= 3 (its coefficient divides by d - 2)",
    )?;
    let df = d as f64;
    let i = TensorOperator::identity(vec![d, d, d])?;
    let q = antisymmetrizer3(d)?;
    DensityOperator::new(&i.scale(1.0 / df.powi(4)) + &q.scale(6.0 / (df * df * (df - 2.0))))
}

/// The singlet `|ψ⁻⟩⟨ψ⁻|`, `ψ⁻ = (e₁⊗e₂ − e₂⊗e₁)/√2`.
pub fn singlet() -> DensityOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [0.0, s, -s, 0.0].map(|x| Complex64::new(x, 0.0));
    DensityOperator::new(TensorOperator::outer(vec![2, 2], &psi).unwrap()).unwrap()
}

/// `I / side` on the given factors.
pub fn maximally_mixed(dims: Vec<usize>) -> Result<DensityOperator> {
    let i = TensorOperator::identity(dims)?;
    let side = i.side() as f64;
    DensityOperator::new(i.scale(1.0 / side))
}
