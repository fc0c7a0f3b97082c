//! Correlation functionals over norm-bounded observables and their see-saw
//! maximization.
//!
//! The correlation of two observables `A`, `B` in a bipartite state `ρ` is
//! `E(A, B) = tr[ρ (A ⊗ B)]`. Two functionals are provided:
//!
//! - the original Bell gap `|E(a,b₁) − E(a,b₂)| − (1 − E(b₁,b₂))`, where the
//!   same `b₁` observable acts on Bob's side in the first term and on
//!   Alice's side in the last one;
//! - the CHSH value `|E(a₁,b₁) + E(a₁,b₂) + E(a₂,b₁) − E(a₂,b₂)|`.
//!
//! Both are linear in each observable separately, so the see-saw replaces
//! one observable at a time by the Hermitian sign of its effective operator,
//! which is the exact maximizer over the unit operator-norm ball.

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::TensorOperator;
use crate::states::DensityOperator;

/// Slack allowed on the operator-norm bound and Hermiticity of observables.
pub const OBSERVABLE_TOL: f64 = 1e-10;

/// Largest local dimension the see-saw accepts.
pub const MAX_SEESAW_DIM: usize = 6;

/// A Hermitian operator on one factor with operator norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    op: TensorOperator,
    label: String,
}

impl Observable {
    pub fn new(op: TensorOperator, label: impl Into<String>) -> Result<Self> {
        if op.dims().len() != 1 {
            return Err(Error::NotSingleFactor {
                dims: op.dims().to_vec(),
            });
        }
        let norm = op
            .eig_hermitian_with_tol(OBSERVABLE_TOL)?
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, l| m.max(l.abs()));
        if norm > 1.0 + OBSERVABLE_TOL {
            return Err(Error::NormExceeded {
                norm,
                tolerance: OBSERVABLE_TOL,
            });
        }
        Ok(Self {
            op: op.symmetrized(),
            label: label.into(),
        })
    }

    pub fn op(&self) -> &TensorOperator {
        &self.op
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.op.side()
    }

    pub fn negated(&self) -> Self {
        Self {
            op: self.op.scale(-1.0),
            label: self.label.clone(),
        }
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// The set of observables a see-saw optimizes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObservableClass {
    /// Every Hermitian operator with operator norm at most one.
    #[default]
    NormBounded,
    /// Traceless qubit observables `n·σ` with `|n| <= 1` (spin
    /// measurements); `d = 2` only.
    Spin,
}

impl ObservableClass {
    /// The maximizer of `tr[effective · W]` over the class.
    fn best_response(self, effective: &TensorOperator, label: &str) -> Result<Observable> {
        let m = effective.symmetrized();
        let op = match self {
            Self::NormBounded => m.hermitian_sign()?,
            Self::Spin => {
                let half_trace = m.trace().re / 2.0;
                let id = TensorOperator::identity(m.dims().to_vec())?;
                let traceless = &m - &id.scale(half_trace);
                if traceless.frobenius_norm() == 0.0 {
                    TensorOperator::diagonal(vec![2], &[1.0, -1.0])?
                } else {
                    traceless.hermitian_sign()?
                }
            }
        };
        Observable::new(op, label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub convergence_eps: f64,
    pub base_seed: u64,
    pub observables: ObservableClass,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_sweeps: 200,
            convergence_eps: 1e-12,
            base_seed: 0,
            observables: ObservableClass::NormBounded,
        }
    }
}

impl SeeSawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.convergence_eps.is_nan() || self.convergence_eps <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "convergence_eps must be positive, got {}",
                self.convergence_eps
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_value: f64,
    /// `[a, b1, b2]` for the original Bell functional, `[a1, a2, b1, b2]`
    /// for CHSH.
    pub observables: Vec<Observable>,
    pub sweeps_used: usize,
    pub restart_index: usize,
    /// Objective after each sweep of the winning run.
    pub value_trace: Vec<f64>,
    /// Sign branch `s` of the absolute value, original Bell functional only.
    pub sign_branch: Option<i8>,
}

fn check_bipartite(rho: &DensityOperator, a_dim: usize, b_dim: usize) -> Result<()> {
    let dims = rho.dims();
    if dims.len() != 2 || dims[0] != a_dim || dims[1] != b_dim {
        return Err(Error::DimensionMismatch {
            expected: vec![a_dim, b_dim],
            found: dims.to_vec(),
        });
    }
    Ok(())
}

/// `tr₂[ρ (I ⊗ B)]`, an operator on the first factor.
fn contract_second(rho: &TensorOperator, b: &TensorOperator) -> TensorOperator {
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    TensorOperator::from_fn(vec![da], |i, k| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..db {
            for l in 0..db {
                acc += rho.get(i * db + j, k * db + l) * b.get(l, j);
            }
        }
        acc
    })
    .unwrap()
}

/// `tr₁[ρ (A ⊗ I)]`, an operator on the second factor.
fn contract_first(rho: &TensorOperator, a: &TensorOperator) -> TensorOperator {
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    TensorOperator::from_fn(vec![db], |j, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..da {
            for k in 0..da {
                acc += rho.get(i * db + j, k * db + l) * a.get(k, i);
            }
        }
        acc
    })
    .unwrap()
}

fn trace_product(a: &TensorOperator, b: &TensorOperator) -> Complex64 {
    let n = a.side();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a.get(i, k) * b.get(k, i);
        }
    }
    acc
}

fn raw_correlation(rho: &TensorOperator, a: &TensorOperator, b: &TensorOperator) -> f64 {
    let z = trace_product(a, &contract_second(rho, b));
    debug_assert!(
        z.im.abs() <= 1e-10,
        "correlation has imaginary part {}",
        z.im
    );
    z.re
}

/// `E(A, B) = tr[ρ (A ⊗ B)]`.
pub fn correlation(rho: &DensityOperator, a: &Observable, b: &Observable) -> Result<f64> {
    check_bipartite(rho, a.dim(), b.dim())?;
    Ok(raw_correlation(rho.op(), a.op(), b.op()))
}

/// `s·(E(a,b₁) − E(a,b₂)) + E(b₁,b₂) − 1` for a fixed sign branch `s`.
pub fn original_bell_branch(
    rho: &DensityOperator,
    ja: &Observable,
    jb1: &Observable,
    jb2: &Observable,
    sign: i8,
) -> Result<f64> {
    let s = f64::from(sign.signum());
    Ok(
        s * (correlation(rho, ja, jb1)? - correlation(rho, ja, jb2)?) + correlation(rho, jb1, jb2)?
            - 1.0,
    )
}

/// `|E(a,b₁) − E(a,b₂)| − (1 − E(b₁,b₂))`; positive values violate the
/// inequality.
pub fn original_bell_gap(
    rho: &DensityOperator,
    ja: &Observable,
    jb1: &Observable,
    jb2: &Observable,
) -> Result<f64> {
    let e1 = correlation(rho, ja, jb1)?;
    let e2 = correlation(rho, ja, jb2)?;
    let e3 = correlation(rho, jb1, jb2)?;
    Ok((e1 - e2).abs() - (1.0 - e3))
}

pub fn chsh_value(
    rho: &DensityOperator,
    a1: &Observable,
    a2: &Observable,
    b1: &Observable,
    b2: &Observable,
) -> Result<f64> {
    Ok(
        (correlation(rho, a1, b1)? + correlation(rho, a1, b2)? + correlation(rho, a2, b1)?
            - correlation(rho, a2, b2)?)
        .abs(),
    )
}

fn random_observable_from(rng: &mut ChaCha8Rng, d: usize, label: &str) -> Result<Observable> {
    let mut g = || -> f64 { StandardNormal.sample(&mut *rng) };
    let raw = TensorOperator::from_fn(vec![d], |_, _| Complex64::new(g(), g()))?;
    let spectrum = raw.symmetrized().eig_hermitian()?;
    Observable::new(spectrum.map_eigenvalues(|l| l.clamp(-1.0, 1.0)), label)
}

fn random_start(
    rng: &mut ChaCha8Rng,
    d: usize,
    class: ObservableClass,
    label: &str,
) -> Result<Observable> {
    let raw = random_observable_from(rng, d, label)?;
    match class {
        ObservableClass::NormBounded => Ok(raw),
        ObservableClass::Spin => class.best_response(raw.op(), label),
    }
}

/// A Gaussian Hermitian matrix with its eigenvalues clamped to `[-1, 1]`.
/// Deterministic in `seed`.
pub fn random_observable(d: usize, seed: u64) -> Result<Observable> {
    if d < 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "observables need d >= 2",
        });
    }
    random_observable_from(&mut ChaCha8Rng::seed_from_u64(seed), d, "random")
}

fn check_seesaw_input(rho: &DensityOperator, cfg: &SeeSawConfig) -> Result<usize> {
    cfg.validate()?;
    let dims = rho.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch {
            expected: vec![dims[0], dims[0]],
            found: dims.to_vec(),
        });
    }
    let d = dims[0];
    if !(2..=MAX_SEESAW_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "see-saw optimization supports 2 <= d <= 6",
        });
    }
    if cfg.observables == ObservableClass::Spin && d != 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "spin observables are defined for qubits only",
        });
    }
    Ok(d)
}

/// Runs one restart per seed (possibly in parallel) and keeps the largest
/// value, ties going to the lowest restart index.
fn best_of_restarts(
    cfg: &SeeSawConfig,
    run: impl Fn(usize, u64) -> Result<OptimizationResult> + Sync,
) -> Result<OptimizationResult> {
    let results: Vec<OptimizationResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run(k, cfg.base_seed.wrapping_add(k as u64)))
        .collect::<Result<_>>()?;
    let mut best: Option<OptimizationResult> = None;
    for r in results {
        if best.as_ref().is_none_or(|b| r.best_value > b.best_value) {
            best = Some(r);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn converged(trace: &[f64], eps: f64) -> bool {
    match trace {
        [.., prev, last] => last - prev < eps,
        _ => false,
    }
}

/// See-saw maximization of the original Bell gap.
///
/// Each restart draws `b₁`, `b₂` at random and runs both sign branches of
/// the absolute value from that start. A sweep updates `a`, then `b₁`
/// (which collects contributions from both terms it appears in), then
/// `b₂`. The reported `best_value` is the gap recomputed from the returned
/// observables, which is never below the branch objective.
pub fn seesaw_original_bell(
    rho: &DensityOperator,
    cfg: &SeeSawConfig,
) -> Result<OptimizationResult> {
    let d = check_seesaw_input(rho, cfg)?;
    let class = cfg.observables;
    let r = rho.op();
    best_of_restarts(cfg, |restart, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b1_init = random_start(&mut rng, d, class, "b1")?;
        let b2_init = random_start(&mut rng, d, class, "b2")?;

        let mut best: Option<OptimizationResult> = None;
        for sign in [1i8, -1] {
            let s = f64::from(sign);
            let (mut b1, mut b2) = (b1_init.clone(), b2_init.clone());
            let mut a = b1.clone();
            let mut trace = Vec::new();
            while trace.len() < cfg.max_sweeps && !converged(&trace, cfg.convergence_eps) {
                let diff = b1.op() - b2.op();
                a = class.best_response(&contract_second(r, &diff).scale(s), "a")?;
                let from_a = contract_first(r, a.op()).scale(s);
                b1 = class.best_response(&(&from_a + &contract_second(r, b2.op())), "b1")?;
                b2 = class.best_response(&(&contract_first(r, b1.op()) - &from_a), "b2")?;
                trace.push(
                    s * (raw_correlation(r, a.op(), b1.op()) - raw_correlation(r, a.op(), b2.op()))
                        + raw_correlation(r, b1.op(), b2.op())
                        - 1.0,
                );
            }
            let value = original_bell_gap(rho, &a, &b1, &b2)?;
            if best.as_ref().is_none_or(|b| value > b.best_value) {
                best = Some(OptimizationResult {
                    best_value: value,
                    sweeps_used: trace.len(),
                    observables: vec![a, b1, b2],
                    restart_index: restart,
                    value_trace: trace,
                    sign_branch: Some(sign),
                });
            }
        }
        Ok(best.unwrap())
    })
}

/// See-saw maximization of the CHSH value. A sweep updates `a₁`, `a₂`,
/// `b₁`, `b₂` in turn.
pub fn seesaw_chsh(rho: &DensityOperator, cfg: &SeeSawConfig) -> Result<OptimizationResult> {
    let d = check_seesaw_input(rho, cfg)?;
    let class = cfg.observables;
    let r = rho.op();
    best_of_restarts(cfg, |restart, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b1 = random_start(&mut rng, d, class, "b1")?;
        let mut b2 = random_start(&mut rng, d, class, "b2")?;
        let (mut a1, mut a2) = (b1.clone(), b2.clone());
        let mut trace = Vec::new();
        while trace.len() < cfg.max_sweeps && !converged(&trace, cfg.convergence_eps) {
            a1 = class.best_response(&contract_second(r, &(b1.op() + b2.op())), "a1")?;
            a2 = class.best_response(&contract_second(r, &(b1.op() - b2.op())), "a2")?;
            b1 = class.best_response(&contract_first(r, &(a1.op() + a2.op())), "b1")?;
            b2 = class.best_response(&contract_first(r, &(a1.op() - a2.op())), "b2")?;
            trace.push(
                raw_correlation(r, a1.op(), b1.op())
                    + raw_correlation(r, a1.op(), b2.op())
                    + raw_correlation(r, a2.op(), b1.op())
                    - raw_correlation(r, a2.op(), b2.op()),
            );
        }
        Ok(OptimizationResult {
            best_value: chsh_value(rho, &a1, &a2, &b1, &b2)?,
            sweeps_used: trace.len(),
            observables: vec![a1, a2, b1, b2],
            restart_index: restart,
            value_trace: trace,
            sign_branch: None,
        })
    })
}

fn pauli() -> [TensorOperator; 3] {
    let x = TensorOperator::from_real(vec![2], &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let y = TensorOperator::new(
        vec![2],
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .unwrap();
    let z = TensorOperator::from_real(vec![2], &[1.0, 0.0, 0.0, -1.0]).unwrap();
    [x, y, z]
}

/// Closed-form two-qubit CHSH maximum `2·sqrt(u₁ + u₂)`, where `u₁ ≥ u₂`
/// are the two largest eigenvalues of `TᵀT` and `T_ij = tr[ρ σ_i ⊗ σ_j]`.
pub fn horodecki_chsh_oracle(rho: &DensityOperator) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch {
            expected: vec![2, 2],
            found: rho.dims().to_vec(),
        });
    }
    let sigma = pauli();
    let t = Matrix3::from_fn(|i, j| {
        rho.op()
            .matmul(&sigma[i].kron(&sigma[j]))
            .unwrap()
            .trace()
            .re
    });
    let mut u: Vec<f64> = (t.transpose() * t)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    u.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * (u[0] + u[1]).max(0.0).sqrt())
}
