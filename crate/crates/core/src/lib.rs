//! Numerics for Werner states, their tripartite source operators, and the
//! original-Bell and CHSH correlation functionals.
//!
//! - [`operator`]: dense tensor-product operators and Hermitian spectral
//!   routines.
//! - [`states`]: flip, antisymmetrizer, Werner and source-operator
//!   constructors.
//! - [`dso`]: marginal-pattern verification and a Dykstra feasibility
//!   search for tripartite extensions.
//! - [`bell`]: correlation functionals and see-saw maximization over
//!   norm-bounded observables.

pub mod bell;
pub mod dso;
pub mod error;
pub mod operator;
pub mod states;
pub mod textfmt;

pub use bell::{Observable, ObservableClass, OptimizationResult, SeeSawConfig};
pub use dso::{FeasibilityResult, MarginalPattern};
pub use error::{Error, Result};
pub use operator::{ComplexScalar, Spectrum, TensorOperator};
pub use states::{DensityOperator, Permutation3};
