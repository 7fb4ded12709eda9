//! Terminal law of the square-root factors under the pricing measure.
//!
//! For a factor with discount exponent `u` the transformed terminal law is a
//! scaled non-central chi-square whose parameters follow from the joint
//! transform `E[exp(-u int X - v X_T)]`: with
//! `gamma = sqrt(k^2 + 2 u sigma^2)`, `rho_± = (-k ± gamma)/2` and
//! `E_± = exp(rho_± T)`,
//!
//! ```text
//! y0    = ((k + gamma) E_+ + (gamma - k) E_-) / (2 gamma)
//! c     = 4 gamma y0 / (sigma^2 (E_+ - E_-))
//! nu    = 4 k theta / sigma^2
//! kappa = c x0 e^{-k T} / y0^2          (classical non-centrality)
//! ```
//!
//! At `u = 0` this collapses to the familiar risk-neutral transition law
//! `c = 4k / (sigma^2 (1 - e^{-kT}))`, `kappa = c x0 e^{-kT}`. The reference
//! convention prices with that unchanged law; the forward convention keeps
//! the genuine `u`-tilted one.

use num_complex::Complex64;
use rand::Rng;

use crate::affine::CirModel;
use crate::distributions::NoncentralChiSquareScaled;
use crate::error::{Error, Result};
use crate::measure::MeasureConvention;

/// Terminal law of one factor.
#[derive(Clone, Debug)]
pub enum CirFactorLaw {
    /// Deterministic factor (`sigma = 0`): point mass at the ODE solution.
    Point(f64),
    ChiSquare {
        /// Time-zero mean-reversion speed under the transformed measure.
        k_fwd: f64,
        /// Time-zero long-run level under the transformed measure.
        theta_fwd: f64,
        law: NoncentralChiSquareScaled,
    },
}

impl CirFactorLaw {
    pub fn mean(&self) -> f64 {
        match self {
            CirFactorLaw::Point(x) => *x,
            CirFactorLaw::ChiSquare { law, .. } => law.mean(),
        }
    }

    /// `E[e^{-v X_T}]`
    pub fn laplace(&self, v: f64) -> Result<f64> {
        match self {
            CirFactorLaw::Point(x) => Ok((-v * x).exp()),
            CirFactorLaw::ChiSquare { law, .. } => law.laplace(v),
        }
    }

    /// `E[e^{-s X_T}]` for complex `s` (the transform along a Fourier ray).
    pub fn laplace_complex(&self, s: Complex64) -> Result<Complex64> {
        match self {
            CirFactorLaw::Point(x) => Ok((-s * *x).exp()),
            CirFactorLaw::ChiSquare { law, .. } => law.mgf(-s),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            CirFactorLaw::Point(x) => *x,
            CirFactorLaw::ChiSquare { law, .. } => law.sample(rng),
        }
    }
}

/// Joint terminal law of all factors (independent across factors).
#[derive(Clone, Debug)]
pub struct CirTransformedLaw {
    pub factors: Vec<CirFactorLaw>,
    pub convention: MeasureConvention,
}

pub fn cir_transformed_law(
    model: &CirModel,
    horizon: f64,
    convention: MeasureConvention,
) -> Result<CirTransformedLaw> {
    if !(horizon > 0.0) {
        return Err(Error::invalid("law horizon must be positive"));
    }
    let mut factors = Vec::with_capacity(model.dim());
    for (factor, u) in model.factors.iter().zip(model.discount_loadings()) {
        if u < 0.0 {
            return Err(Error::UnsupportedExponent(u));
        }
        let u_eff = match convention {
            MeasureConvention::Forward => u,
            // the reference methodology keeps the terminal law untilted
            MeasureConvention::Reference => 0.0,
        };
        if factor.sigma == 0.0 {
            factors.push(CirFactorLaw::Point(factor.mean_at(horizon)));
            continue;
        }
        let (k, sigma2) = (factor.k, factor.sigma * factor.sigma);
        let gamma = (k * k + 2.0 * u_eff * sigma2).sqrt();
        let rho_plus = 0.5 * (gamma - k);
        let rho_minus = -0.5 * (gamma + k);
        let ep = (rho_plus * horizon).exp();
        let em = (rho_minus * horizon).exp();
        let y0 = ((k + gamma) * ep + (gamma - k) * em) / (2.0 * gamma);
        let c = 4.0 * gamma * y0 / (sigma2 * (ep - em));
        let nu = 4.0 * k * factor.theta / sigma2;
        let kappa = c * factor.x0 * (-k * horizon).exp() / (y0 * y0);
        let k_fwd = match convention {
            MeasureConvention::Forward => {
                let (_, psi) = crate::affine::cir_riccati(horizon, u, factor)?;
                k + sigma2 * psi
            }
            MeasureConvention::Reference => k,
        };
        factors.push(CirFactorLaw::ChiSquare {
            k_fwd,
            theta_fwd: k * factor.theta / k_fwd,
            law: NoncentralChiSquareScaled::new(nu, 0.5 * kappa, c)?,
        });
    }
    Ok(CirTransformedLaw { factors, convention })
}
