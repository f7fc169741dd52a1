//! Directional multivariate Spearman footrule coefficients.
//!
//! For a `d`-copula `C` and a direction `α ∈ {-1, +1}^d` the coefficient
//! `φ_d^α(C)` measures how much more (or less) mass `C` puts on the
//! directional orthant `{α_i U_i > α_i u}` than independence does, integrated
//! along the diagonal. The crate provides
//!
//! * [`copulas`]: parametric copula families, reflection, survival copulas,
//!   `C`-volumes and grid validation;
//! * [`coefficients`]: exact values by closed form, quadrature and the
//!   decomposition into lower-dimensional coefficients;
//! * [`sampling`]: seeded samplers for every family;
//! * [`estimators`]: the rank-based estimator `φ̃` and its exact identities;
//! * [`experiments`]: the Monte Carlo harness, table reproduction, sweeps.
//!
//! Replications and direction tables run on rayon when the `parallel`
//! feature is enabled (the default); see [`exec::Execution`].

pub mod coefficients;
pub mod copulas;
pub mod direction;
mod error;
pub mod estimators;
pub mod exec;
pub mod experiments;
pub mod numfmt;
pub mod sampling;

pub use coefficients::{CoefficientValue, Method, QuadratureSpec};
pub use copulas::{Copula, CopulaModel, Family};
pub use direction::Direction;
pub use error::{Error, Result};
pub use estimators::{EstimateValue, RankMatrix, TiePolicy};
pub use exec::Execution;
pub use sampling::{Dataset, RngStream};
