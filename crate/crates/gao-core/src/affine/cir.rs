//! Multi-factor square-root (CIR) short-rate / mortality model and the
//! closed-form solutions of its Riccati equations.
//!
//! Each factor follows `dX = k (theta - X) dt + sigma sqrt(X) dW` under the
//! risk-neutral measure, independently of the others. Rate and mortality are
//! affine projections `r = r_bar + <R, X>` and `mu = mu_bar + <M, X>`.

use crate::error::{Error, Result};

/// Parameters of one square-root factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirFactor {
    pub k: f64,
    pub theta: f64,
    pub sigma: f64,
    pub x0: f64,
}

impl CirFactor {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) {
            return Err(Error::invalid(format!("mean reversion k must be positive, got {}", self.k)));
        }
        if self.sigma < 0.0 {
            return Err(Error::invalid("volatility sigma must be non-negative"));
        }
        if self.theta < 0.0 || self.x0 < 0.0 {
            return Err(Error::invalid("long-run level and initial value must be non-negative"));
        }
        if ![self.k, self.theta, self.sigma, self.x0].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("factor parameters must be finite"));
        }
        Ok(())
    }

    /// `E[X_t] = x0 e^{-k t} + theta (1 - e^{-k t})`
    pub fn mean_at(&self, t: f64) -> f64 {
        let decay = (-self.k * t).exp();
        self.x0 * decay + self.theta * (1.0 - decay)
    }
}

/// Multi-factor model with factor loadings for rate and mortality.
#[derive(Clone, Debug, PartialEq)]
pub struct CirModel {
    pub factors: Vec<CirFactor>,
    pub r_bar: f64,
    pub mu_bar: f64,
    /// Rate loadings `R` (one per factor).
    pub rate_loadings: Vec<f64>,
    /// Mortality loadings `M` (one per factor).
    pub mortality_loadings: Vec<f64>,
}

impl CirModel {
    pub fn new(
        factors: Vec<CirFactor>,
        r_bar: f64,
        mu_bar: f64,
        rate_loadings: Vec<f64>,
        mortality_loadings: Vec<f64>,
    ) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("need at least one factor"));
        }
        if rate_loadings.len() != factors.len() || mortality_loadings.len() != factors.len() {
            return Err(Error::invalid("loading vectors must match the number of factors"));
        }
        for f in &factors {
            f.validate()?;
        }
        if !r_bar.is_finite() || !mu_bar.is_finite() {
            return Err(Error::invalid("constant shifts must be finite"));
        }
        let model = CirModel { factors, r_bar, mu_bar, rate_loadings, mortality_loadings };
        for (j, u) in model.discount_loadings().iter().enumerate() {
            if *u < 0.0 {
                return Err(Error::UnsupportedExponent(*u).into_invalid_loading(j));
            }
        }
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Per-factor discount exponents `R_j + M_j`.
    pub fn discount_loadings(&self) -> Vec<f64> {
        self.rate_loadings
            .iter()
            .zip(&self.mortality_loadings)
            .map(|(r, m)| r + m)
            .collect()
    }
}

impl Error {
    fn into_invalid_loading(self, j: usize) -> Error {
        match self {
            Error::UnsupportedExponent(u) => Error::InvalidArgument(format!(
                "discount loading R_{j} + M_{j} = {u} is negative"
            )),
            other => other,
        }
    }
}

/// Closed-form solution of the factor Riccati system
///
/// ```text
/// psi' = u - k psi - (sigma^2 / 2) psi^2,   psi(0) = 0
/// phi' = k theta psi,                       phi(0) = 0
/// ```
///
/// giving `E[exp(-u int_0^tau X_s ds)] = exp(-phi - psi x0)`.
pub fn cir_riccati(tau: f64, u: f64, factor: &CirFactor) -> Result<(f64, f64)> {
    if u < 0.0 {
        return Err(Error::UnsupportedExponent(u));
    }
    if tau < 0.0 {
        return Err(Error::invalid("horizon must be non-negative"));
    }
    if tau == 0.0 || u == 0.0 {
        return Ok((0.0, 0.0));
    }
    let (k, sigma) = (factor.k, factor.sigma);
    if sigma == 0.0 {
        // deterministic factor: direct integration
        let decay = (-k * tau).exp();
        let psi = u * (1.0 - decay) / k;
        let phi = factor.theta * (u * tau - psi);
        return Ok((phi, psi));
    }
    let sigma2 = sigma * sigma;
    let gamma = (k * k + 2.0 * u * sigma2).sqrt();
    let e = (gamma * tau).exp();
    let denom = (gamma + k) * (e - 1.0) + 2.0 * gamma;
    let psi = 2.0 * u * (e - 1.0) / denom;
    let phi = (2.0 * k * factor.theta / sigma2)
        * ((denom / (2.0 * gamma)).ln() - 0.5 * (k + gamma) * tau);
    if !psi.is_finite() || !phi.is_finite() {
        return Err(Error::NumericalBlowup { step: 0, t: tau });
    }
    Ok((phi, psi))
}

/// Riccati solution extended with an arbitrary terminal exponent:
/// `E[exp(-u int_0^tau X - v X_tau)] = exp(-phi - psi x0)` where now
/// `psi(0) = v`. Oracle for the transformed-measure terminal law.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn cir_riccati_with_terminal(
    tau: f64,
    u: f64,
    v: f64,
    factor: &CirFactor,
) -> Result<(f64, f64)> {
    if u < 0.0 {
        return Err(Error::UnsupportedExponent(u));
    }
    let (k, sigma) = (factor.k, factor.sigma);
    if sigma == 0.0 {
        let decay = (-k * tau).exp();
        let (phi0, psi0) = cir_riccati(tau, u, factor)?;
        // linear ODE: psi' = u - k psi
        return Ok((phi0 + factor.theta * v * (1.0 - decay), psi0 + v * decay));
    }
    let sigma2 = sigma * sigma;
    let gamma = (k * k + 2.0 * u * sigma2).sqrt();
    // linearization psi = (2/sigma^2) y'/y with y'' + k y' - (u sigma^2/2) y = 0
    let rho_plus = 0.5 * (-k + gamma);
    let rho_minus = 0.5 * (-k - gamma);
    let a = (v * sigma2 + k + gamma) / (2.0 * gamma);
    let b = (gamma - k - v * sigma2) / (2.0 * gamma);
    let ep = (rho_plus * tau).exp();
    let em = (rho_minus * tau).exp();
    let y = a * ep + b * em;
    if y <= 0.0 {
        return Err(Error::DivergentTransform(format!(
            "terminal exponent v = {v} outside the convergence strip at tau = {tau}"
        )));
    }
    let yprime = a * rho_plus * ep + b * rho_minus * em;
    let psi = 2.0 / sigma2 * yprime / y;
    let phi = 2.0 * factor.k * factor.theta / sigma2 * y.ln();
    Ok((phi, psi))
}
