//! Construction of the terminal law of the state under the annuity pricing
//! measure, plus the Radon-Nikodym-weighted path oracle that arbitrates any
//! transformed-parameter algebra.
//!
//! # Conventions
//!
//! Two parameterizations of the transformed terminal law are supported:
//!
//! * [`MeasureConvention::Forward`] is the numeraire-consistent measure
//!   change. It is the one that satisfies the bond-consistency identity
//!   `P(0,T) E~[S_T^(i)] = P(0,T+i)` for every tenor, and it agrees with the
//!   path oracle.
//! * [`MeasureConvention::Reference`] reproduces the closed-form methodology
//!   behind the reference tables shipped with this crate (unchanged
//!   square-root terminal laws; singly-corrected Wishart drift with the
//!   linear-Theta trace form). It does **not** satisfy the identity; the
//!   residuals are reported so the divergence is visible in every run.

mod cir;
mod rnpath;
mod wishart;

use num_complex::Complex64;
use rand::Rng;

pub use cir::{cir_transformed_law, CirFactorLaw, CirTransformedLaw};
pub use rnpath::{rn_path_expectation, rn_path_terminal_samples, PathConfig, TerminalState};
pub(crate) use rnpath::Welford;
pub use wishart::{wishart_transformed_law, WishartTransformedLaw};

use crate::affine::{szcb_price, tenor_curve, ContractSpec, Model, TenorCurve, TenorExponent};
use crate::error::{Error, Result};

/// Tolerance of the bond-consistency identity, the decisive model-free
/// correctness gate for the forward convention.
pub const BOND_IDENTITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureConvention {
    /// Numeraire-consistent transformed measure.
    Forward,
    /// Convention of the shipped reference tables.
    Reference,
}

/// Terminal law for either model family.
#[derive(Clone, Debug)]
pub enum TransformedLaw {
    Cir(CirTransformedLaw),
    Wishart(WishartTransformedLaw),
}

impl TransformedLaw {
    /// `E~[exp(-<psi, X_T>)]`
    pub fn exponent_laplace(&self, psi: &TenorExponent) -> Result<f64> {
        match (self, psi) {
            (TransformedLaw::Cir(law), TenorExponent::Vector(v)) => {
                let mut prod = 1.0;
                for (factor, vi) in law.factors.iter().zip(v) {
                    prod *= factor.laplace(*vi)?;
                }
                Ok(prod)
            }
            (TransformedLaw::Wishart(law), TenorExponent::Matrix(u)) => law.law.laplace(u),
            _ => Err(Error::invalid("law and exponent families do not match")),
        }
    }

    /// `E~[exp(-s <psi, X_T>)]` for complex `s` on the closed right half
    /// plane (and the imaginary axis), used by the Fourier leg.
    pub fn exponent_laplace_complex(
        &self,
        s: Complex64,
        psi: &TenorExponent,
    ) -> Result<Complex64> {
        match (self, psi) {
            (TransformedLaw::Cir(law), TenorExponent::Vector(v)) => {
                let mut prod = Complex64::new(1.0, 0.0);
                for (factor, vi) in law.factors.iter().zip(v) {
                    prod *= factor.laplace_complex(s * *vi)?;
                }
                Ok(prod)
            }
            (TransformedLaw::Wishart(law), TenorExponent::Matrix(w)) => {
                law.law.laplace_complex(s, w)
            }
            _ => Err(Error::invalid("law and exponent families do not match")),
        }
    }

    /// Draws a terminal state. Errors when the law has no exact sampler
    /// (non-integer Wishart shape).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TerminalState> {
        match self {
            TransformedLaw::Cir(law) => {
                Ok(TerminalState::Cir(law.factors.iter().map(|f| f.sample(rng)).collect()))
            }
            TransformedLaw::Wishart(law) => Ok(TerminalState::Wishart(law.law.sample(rng)?)),
        }
    }

    pub fn has_exact_sampler(&self) -> bool {
        match self {
            TransformedLaw::Cir(_) => true,
            TransformedLaw::Wishart(law) => {
                let beta = law.law.beta();
                (beta - beta.round()).abs() <= 1e-9
                    && beta.round() >= law.law.dim() as f64 - 1.0
            }
        }
    }
}

/// Everything the bound and Monte Carlo engines need for one configuration:
/// the contract, the tenor curve, the bond curve and the terminal law.
#[derive(Clone, Debug)]
pub struct PricingSetup {
    pub model: Model,
    pub contract: ContractSpec,
    pub convention: MeasureConvention,
    pub curve: TenorCurve,
    /// `P(0, T + i)` for `i = 1..=n-1`.
    pub bond_curve: Vec<f64>,
    pub law: TransformedLaw,
    /// Per-tenor relative residuals of the bond-consistency identity.
    pub identity_residuals: Vec<f64>,
}

impl PricingSetup {
    /// Basket value `sum_i S_0^(i) exp(-<psi_i, X_T>)` at a terminal state.
    pub fn basket_value(&self, state: &TerminalState) -> f64 {
        self.curve
            .tenors
            .iter()
            .map(|t| {
                let expo = match (&t.psi, state) {
                    (TenorExponent::Vector(v), TerminalState::Cir(x)) => {
                        v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
                    }
                    (TenorExponent::Matrix(m), TerminalState::Wishart(x)) => {
                        m.as_matrix().frobenius_dot(x)
                    }
                    _ => f64::NAN,
                };
                (t.ln_s0 - expo).exp()
            })
            .sum()
    }

    pub fn max_identity_residual(&self) -> f64 {
        self.identity_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Assembles the pricing setup and checks the bond-consistency identity.
///
/// Under the forward convention a violation beyond [`BOND_IDENTITY_TOL`] is
/// an error; under the reference convention the residuals are informational.
pub fn build_setup(
    model: &Model,
    contract: &ContractSpec,
    convention: MeasureConvention,
) -> Result<PricingSetup> {
    let horizon = f64::from(contract.maturity());
    let curve = tenor_curve(model, contract)?;
    let law = match model {
        Model::Cir(m) => TransformedLaw::Cir(cir_transformed_law(m, horizon, convention)?),
        Model::Wishart(m) => {
            TransformedLaw::Wishart(wishart_transformed_law(m, horizon, convention)?)
        }
    };
    let mut bond_curve = Vec::with_capacity(curve.tenors.len());
    let mut residuals = Vec::with_capacity(curve.tenors.len());
    for point in &curve.tenors {
        let target = szcb_price(model, horizon + point.tenor as f64)?;
        let implied = curve.p0_horizon * point.s0() * law.exponent_laplace(&point.psi)?;
        let residual = (implied - target).abs() / target;
        if convention == MeasureConvention::Forward && residual > BOND_IDENTITY_TOL {
            return Err(Error::MeasureConstruction {
                max_residual: residual,
                tenor: point.tenor,
            });
        }
        bond_curve.push(target);
        residuals.push(residual);
    }
    Ok(PricingSetup {
        model: model.clone(),
        contract: contract.clone(),
        convention,
        curve,
        bond_curve,
        law,
        identity_residuals: residuals,
    })
}
