//! Discrete Schur-constant multivariate equilibrium distribution models.
//!
//! A base law `X` on ℕ₀ generates an `n`-dimensional vector whose joint
//! survival is `P(X_1 >= x_1, .., X_n >= x_n) = S^{(n-1)*}(x_1 + .. + x_n)`,
//! where `S^{(n-1)*}` is the survival function of the `(n-1)`-th order
//! equilibrium law of `X`. The crate builds these models and computes their
//! joint laws, marginals, moments, correlations and sum distributions, and
//! ships an independent brute-force [`oracle`] for every closed form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod description;
pub mod dist;
pub mod equilibrium;
pub mod error;
pub mod io;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod sample;

pub use coeffs::{delta_inverse_coeffs, CoefficientTriangle};
pub use description::{BaseDescription, ModelDescription};
pub use dist::{
    check_n_monotone, forward_difference, DiscreteDistribution, Kind, MomentEstimate,
    MonotonicityReport,
};
pub use equilibrium::{
    bivariate_eq_stats, equilibrium_moment, nth_equilibrium, stationary_excess, EquilibriumChain,
};
pub use error::{Error, Result};
pub use model::{
    build_model, poisson_rho, poisson_rho_conjecture, RhoMethod, RhoResult, SchurModel,
};
pub use oracle::{verify_model, VerificationReport};
pub use sample::sample;
