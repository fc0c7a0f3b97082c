//! Marginal constraints on tripartite operators.
//!
//! A [`MarginalPattern`] lists which factor of a `[d, d, d]` operator is
//! traced out and which bipartite state the remaining pair must reduce to.
//! [`verify_marginals`] checks a given candidate; [`dykstra_find_extension`]
//! searches for one by Dykstra's alternating projections between the
//! density-operator set and the affine marginal sets.

use crate::error::{Error, Result};
use crate::operator::TensorOperator;
use crate::states::DensityOperator;

/// Largest local dimension the feasibility search accepts.
pub const MAX_SEARCH_DIM: usize = 6;

#[derive(Debug, Clone)]
pub struct MarginalPattern {
    constraints: Vec<(usize, DensityOperator)>,
    d: usize,
}

impl MarginalPattern {
    /// Each constraint is `(traced factor position in 1..=3, target on [d, d])`.
    pub fn new(constraints: Vec<(usize, DensityOperator)>) -> Result<Self> {
        if constraints.is_empty() || constraints.len() > 3 {
            return Err(Error::InvalidPattern(format!(
                "expected 1 to 3 constraints, got {}",
                constraints.len()
            )));
        }
        let target_dims = constraints[0].1.dims().to_vec();
        if target_dims.len() != 2 || target_dims[0] != target_dims[1] {
            return Err(Error::InvalidPattern(format!(
                "targets must act on [d, d], got {target_dims:?}"
            )));
        }
        let mut seen = [false; 3];
        for (position, target) in &constraints {
            if !(1..=3).contains(position) {
                return Err(Error::InvalidPattern(format!(
                    "traced factor {position} is not in 1..=3"
                )));
            }
            if std::mem::replace(&mut seen[position - 1], true) {
                return Err(Error::InvalidPattern(format!(
                    "traced factor {position} listed twice"
                )));
            }
            if target.dims() != target_dims.as_slice() {
                return Err(Error::InvalidPattern(format!(
                    "targets disagree on dims: {:?} vs {target_dims:?}",
                    target.dims()
                )));
            }
        }
        Ok(Self {
            d: target_dims[0],
            constraints,
        })
    }

    /// All three marginals equal `rho`.
    pub fn symmetric(rho: &DensityOperator) -> Result<Self> {
        Self::new((1..=3).map(|j| (j, rho.clone())).collect())
    }

    /// Marginals over factors 2 and 3 equal `rho`.
    pub fn right_pair(rho: &DensityOperator) -> Result<Self> {
        Self::new(vec![(2, rho.clone()), (3, rho.clone())])
    }

    pub fn constraints(&self) -> &[(usize, DensityOperator)] {
        &self.constraints
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    fn check_operator(&self, t: &TensorOperator) -> Result<()> {
        let expected = vec![self.d; 3];
        if t.dims() != expected.as_slice() {
            return Err(Error::DimensionMismatch {
                expected,
                found: t.dims().to_vec(),
            });
        }
        Ok(())
    }

    fn max_marginal_distance(&self, t: &TensorOperator) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (j, target) in &self.constraints {
            worst = worst.max(t.partial_trace(*j)?.frobenius_distance(target.op())?);
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone)]
pub struct MarginalCheck {
    /// `(traced factor, ||tr_j t - target||_F)` in pattern order.
    pub residuals: Vec<(usize, f64)>,
    pub is_density: bool,
    pub passed: bool,
}

pub fn verify_marginals(
    t: &TensorOperator,
    pattern: &MarginalPattern,
    tol: f64,
) -> Result<MarginalCheck> {
    pattern.check_operator(t)?;
    let residuals = pattern
        .constraints
        .iter()
        .map(|(j, target)| Ok((*j, t.partial_trace(*j)?.frobenius_distance(target.op())?)))
        .collect::<Result<Vec<_>>>()?;
    let is_density = DensityOperator::with_tol(t.clone(), tol).is_ok();
    let passed = is_density && residuals.iter().all(|&(_, r)| r <= tol);
    Ok(MarginalCheck {
        residuals,
        is_density,
        passed,
    })
}

/// Max marginal distance plus PSD deficit `|min(0, λ_min)|` plus `|tr − 1|`.
pub fn feasibility_residual(t: &TensorOperator, pattern: &MarginalPattern) -> Result<f64> {
    pattern.check_operator(t)?;
    let deficit = (-t.min_eigenvalue()?).max(0.0);
    Ok(pattern.max_marginal_distance(t)? + deficit + (t.trace().re - 1.0).abs())
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub candidate: TensorOperator,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual after every completed projection cycle.
    pub history: Vec<f64>,
}

/// Euclidean projection of `values` onto the probability simplex.
pub fn project_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}

/// Frobenius-nearest density operator: clip the spectrum onto the simplex.
pub fn project_density(y: &TensorOperator) -> Result<TensorOperator> {
    let spectrum = y.eig_hermitian()?;
    Ok(spectrum.reconstruct_with(&project_simplex(&spectrum.eigenvalues)))
}

/// Orthogonal projection onto `{T : tr_j T = target}`.
pub fn project_marginal(
    y: &TensorOperator,
    position: usize,
    target: &TensorOperator,
) -> Result<TensorOperator> {
    let dim = *y
        .dims()
        .get(position.wrapping_sub(1))
        .ok_or(Error::FactorOutOfRange {
            position,
            factors: y.dims().len(),
        })?;
    let deficit = target.try_sub(&y.partial_trace(position)?)?;
    let correction = deficit
        .scale(1.0 / dim as f64)
        .embed_identity(position, dim)?;
    y.try_add(&correction)
}

/// Dykstra's algorithm for a tripartite operator whose marginals match
/// `pattern`, starting from `rho ⊗ I/d` placed per the first constraint.
///
/// Each cycle projects onto every affine marginal set in pattern order and
/// then onto the density-operator set, so every iterate is a density
/// operator. Running out of iterations is reported through
/// `converged = false`, never as an error; a large residual is not a proof
/// that no extension exists.
pub fn dykstra_find_extension(
    rho: &DensityOperator,
    pattern: &MarginalPattern,
    max_iters: usize,
    tol: f64,
) -> Result<FeasibilityResult> {
    let d = pattern.local_dim();
    if rho.dims() != [d, d] {
        return Err(Error::DimensionMismatch {
            expected: vec![d, d],
            found: rho.dims().to_vec(),
        });
    }
    for (j, target) in pattern.constraints() {
        if target.op().max_abs_diff(rho.op())? > 1e-12 {
            return Err(Error::InvalidPattern(format!(
                "target for traced factor {j} differs from the state being extended"
            )));
        }
    }
    if d > MAX_SEARCH_DIM {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "feasibility search is limited to d <= 6",
        });
    }

    let first = pattern.constraints()[0].0;
    let mut x = rho.op().scale(1.0 / d as f64).embed_identity(first, d)?;
    let start = feasibility_residual(&x, pattern)?;
    if start <= tol {
        return Ok(FeasibilityResult {
            candidate: x,
            residual: start,
            iterations: 0,
            converged: true,
            history: vec![start],
        });
    }

    let n_sets = pattern.constraints().len() + 1;
    let zero = TensorOperator::zeros(vec![d; 3])?;
    let mut corrections = vec![zero; n_sets];
    let mut best = (start, x.clone(), 0usize);
    let mut history = vec![start];

    for iter in 1..=max_iters {
        for (k, (j, target)) in pattern.constraints().iter().enumerate() {
            let y = &x + &corrections[k];
            x = project_marginal(&y, *j, target.op())?;
            corrections[k] = &y - &x;
        }
        let k = n_sets - 1;
        let y = &x + &corrections[k];
        let spectrum = y.eig_hermitian()?;
        let clipped = project_simplex(&spectrum.eigenvalues);
        x = spectrum.reconstruct_with(&clipped);
        corrections[k] = &y - &x;

        // `clipped` is nonnegative, so only the marginal and trace terms remain.
        let residual = pattern.max_marginal_distance(&x)? + (x.trace().re - 1.0).abs();
        history.push(residual);
        if residual < best.0 {
            best = (residual, x.clone(), iter);
        }
        if residual <= tol {
            break;
        }
    }

    let (_, candidate, iterations) = best;
    let residual = feasibility_residual(&candidate, pattern)?;
    Ok(FeasibilityResult {
        converged: residual <= tol,
        candidate,
        residual,
        iterations,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dso_general, dso_two_qubit, maximally_mixed, singlet, werner};

    #[test]
    fn pattern_validation() {
        let w = werner(2).unwrap();
        assert!(MarginalPattern::new(vec![]).is_err());
        assert!(MarginalPattern::new(vec![(0, w.clone())]).is_err());
        assert!(MarginalPattern::new(vec![(4, w.clone())]).is_err());
        assert!(MarginalPattern::new(vec![(2, w.clone()), (2, w.clone())]).is_err());
        let w3 = werner(3).unwrap();
        assert!(MarginalPattern::new(vec![(1, w.clone()), (2, w3)]).is_err());
        let mixed = maximally_mixed(vec![4]).unwrap();
        assert!(MarginalPattern::new(vec![(1, mixed)]).is_err());
        assert_eq!(
            MarginalPattern::symmetric(&w).unwrap().constraints().len(),
            3
        );
    }

    #[test]
    fn symmetric_source_operator_d3() {
        let pattern = MarginalPattern::symmetric(&werner(3).unwrap()).unwrap();
        let check = verify_marginals(dso_general(3).unwrap().op(), &pattern, 1e-10).unwrap();
        assert!(check.passed);
        assert!(check.residuals.iter().all(|&(_, r)| r <= 1e-10));
    }

    #[test]
    fn two_qubit_source_operator() {
        let pattern = MarginalPattern::right_pair(&werner(2).unwrap()).unwrap();
        let check = verify_marginals(dso_two_qubit().unwrap().op(), &pattern, 1e-12).unwrap();
        assert!(check.passed);
        assert_eq!(check.residuals.len(), 2);
    }

    #[test]
    fn maximally_mixed_candidate_misses_werner_marginals() {
        // ||I/4 - ρ_2||_F = ||(1/8) I - (1/2) P⁻||_F; P⁻ is rank one, so the
        // difference has eigenvalues {1/8 - 1/2, 1/8, 1/8, 1/8}.
        let expected = (0.375f64.powi(2) + 3.0 * 0.125f64.powi(2)).sqrt();
        let pattern = MarginalPattern::right_pair(&werner(2).unwrap()).unwrap();
        let t = maximally_mixed(vec![2, 2, 2]).unwrap();
        let check = verify_marginals(t.op(), &pattern, 1e-10).unwrap();
        assert!(!check.passed);
        assert!(check.is_density);
        for (_, r) in check.residuals {
            assert!((r - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn verify_rejects_wrong_dims() {
        let pattern = MarginalPattern::symmetric(&werner(3).unwrap()).unwrap();
        let t = dso_two_qubit().unwrap();
        assert!(matches!(
            verify_marginals(t.op(), &pattern, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.3, -0.2, 0.4, 0.1]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&v| v >= 0.0));
        // shift θ = -1/15 on the support {0.3, 0.4, 0.1}.
        for (got, want) in p.iter().zip([11.0 / 30.0, 0.0, 14.0 / 30.0, 5.0 / 30.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_extends_immediately() {
        let rho = maximally_mixed(vec![2, 2]).unwrap();
        let pattern = MarginalPattern::symmetric(&rho).unwrap();
        let res = dykstra_find_extension(&rho, &pattern, 100, 1e-12).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 0);
        assert!(res.residual <= 1e-12);
        let expected = maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!(res.candidate.max_abs_diff(expected.op()).unwrap() < 1e-15);
    }

    #[test]
    fn search_rejects_mismatched_pattern() {
        let rho = werner(2).unwrap();
        let other = MarginalPattern::right_pair(&singlet()).unwrap();
        assert!(matches!(
            dykstra_find_extension(&rho, &other, 10, 1e-6),
            Err(Error::InvalidPattern(_))
        ));
        let w3 = MarginalPattern::symmetric(&werner(3).unwrap()).unwrap();
        assert!(matches!(
            dykstra_find_extension(&rho, &w3, 10, 1e-6),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
