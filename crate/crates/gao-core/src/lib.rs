//! Pricing engine for guaranteed annuity options under correlated affine
//! interest-rate and mortality models.
//!
//! The engine computes model-independent lower and upper price bounds plus
//! Monte Carlo benchmark estimates for the option to convert a unit cash
//! amount into a life annuity at a guaranteed rate, when both the short rate
//! and the mortality intensity are driven by a common affine factor process
//! (multi-factor square-root or Wishart).
//!
//! Organization:
//!
//! * [`numerics`] - matrix kernels, matrix exponential, RK4, quadrature;
//! * [`affine`] - contract, models, Riccati solutions, survival-bond curve;
//! * [`distributions`] - terminal laws (non-central chi-square / Wishart);
//! * [`measure`] - transformed-measure law construction and the
//!   Radon-Nikodym-weighted path oracle;
//! * [`bounds`] - the lower/upper bound engines;
//! * [`montecarlo`] - benchmark estimators with reproducible parallelism;
//! * [`reference`] - built-in reference configurations and sweep grids;
//! * [`validate`] - the machine-readable invariant suite.

pub mod affine;
pub mod bounds;
pub mod distributions;
pub mod error;
pub mod measure;
pub mod numerics;
pub mod montecarlo;
pub mod reference;
pub mod validate;

pub use affine::{CirFactor, CirModel, ContractSpec, Model, WishartModel};
pub use error::{Error, Result};
pub use measure::{MeasureConvention, PricingSetup};
