//! Survival zero-coupon bond pricing and the tenor curve of the annuity
//! basket.

use crate::affine::{cir_riccati, wishart_riccati, CirModel, ContractSpec, WishartModel};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

/// Either model family.
#[derive(Clone, Debug)]
pub enum Model {
    Cir(CirModel),
    Wishart(WishartModel),
}

impl Model {
    pub fn r_bar(&self) -> f64 {
        match self {
            Model::Cir(m) => m.r_bar,
            Model::Wishart(m) => m.r_bar,
        }
    }

    pub fn mu_bar(&self) -> f64 {
        match self {
            Model::Cir(m) => m.mu_bar,
            Model::Wishart(m) => m.mu_bar,
        }
    }
}

/// Exponent of one basket asset: `S_T = S_0 exp(-<psi, X_T>)`.
#[derive(Clone, Debug)]
pub enum TenorExponent {
    /// Per-factor coefficients (square-root model).
    Vector(Vec<f64>),
    /// Matrix exponent (Wishart model).
    Matrix(SymMatrix),
}

/// One maturity on the annuity basket curve.
#[derive(Clone, Debug)]
pub struct TenorPoint {
    /// Tenor in years past the option maturity (1-based).
    pub tenor: usize,
    pub phi: f64,
    pub psi: TenorExponent,
    /// `ln S_0 = -((r_bar + mu_bar) tenor + phi)`
    pub ln_s0: f64,
}

impl TenorPoint {
    pub fn s0(&self) -> f64 {
        self.ln_s0.exp()
    }
}

/// Riccati data for every basket tenor plus the numeraire horizon.
#[derive(Clone, Debug)]
pub struct TenorCurve {
    pub tenors: Vec<TenorPoint>,
    pub horizon_phi: f64,
    pub horizon_psi: TenorExponent,
    /// `P(0, T)` of the numeraire bond.
    pub p0_horizon: f64,
}

impl TenorCurve {
    /// Equally weighted mean of the tenor exponents (drives the geometric
    /// average of the basket).
    pub fn mean_exponent(&self) -> TenorExponent {
        let n = self.tenors.len() as f64;
        match &self.tenors[0].psi {
            TenorExponent::Vector(first) => {
                let mut acc = vec![0.0; first.len()];
                for t in &self.tenors {
                    if let TenorExponent::Vector(v) = &t.psi {
                        for (a, x) in acc.iter_mut().zip(v) {
                            *a += x / n;
                        }
                    }
                }
                TenorExponent::Vector(acc)
            }
            TenorExponent::Matrix(first) => {
                let mut acc = first.as_matrix().scaled(1.0 / n);
                for t in self.tenors.iter().skip(1) {
                    if let TenorExponent::Matrix(m) = &t.psi {
                        acc.axpy_inplace(1.0 / n, m.as_matrix());
                    }
                }
                TenorExponent::Matrix(SymMatrix::symmetrized(&acc).expect("mean of symmetric"))
            }
        }
    }

    /// `Y_0`, the time-zero log-geometric average of the basket.
    pub fn log_geo_mean_s0(&self) -> f64 {
        self.tenors.iter().map(|t| t.ln_s0).sum::<f64>() / self.tenors.len() as f64
    }
}

/// Price of the survival zero-coupon bond `P(0, tau)`.
pub fn szcb_price(model: &Model, tau: f64) -> Result<f64> {
    let shift = (model.r_bar() + model.mu_bar()) * tau;
    let exponent = match model {
        Model::Cir(m) => {
            let mut acc = shift;
            for (factor, u) in m.factors.iter().zip(m.discount_loadings()) {
                let (phi, psi) = cir_riccati(tau, u, factor)?;
                acc += phi + psi * factor.x0;
            }
            acc
        }
        Model::Wishart(m) => {
            let (phi, psi) = wishart_riccati(tau, &m.discount_loading(), m)?;
            shift + phi + psi.as_matrix().frobenius_dot(m.x0.as_matrix())
        }
    };
    let price = (-exponent).exp();
    if !price.is_finite() || price <= 0.0 {
        return Err(Error::NumericalBlowup { step: 0, t: tau });
    }
    Ok(price)
}

/// Builds the Riccati curve for tenors `1..n-1` and the pricing horizon.
pub fn tenor_curve(model: &Model, contract: &ContractSpec) -> Result<TenorCurve> {
    let shift = model.r_bar() + model.mu_bar();
    let horizon = f64::from(contract.maturity());
    let mut tenors = Vec::with_capacity(contract.basket_size());
    for i in 1..=contract.basket_size() {
        let tau = i as f64;
        let (phi, psi) = riccati_at(model, tau)?;
        let ln_s0 = -(shift * tau + phi);
        if !ln_s0.is_finite() {
            return Err(Error::NumericalBlowup { step: i, t: tau });
        }
        tenors.push(TenorPoint { tenor: i, phi, psi, ln_s0 });
    }
    let (horizon_phi, horizon_psi) = riccati_at(model, horizon)?;
    let p0_horizon = szcb_price(model, horizon)?;
    Ok(TenorCurve { tenors, horizon_phi, horizon_psi, p0_horizon })
}

fn riccati_at(model: &Model, tau: f64) -> Result<(f64, TenorExponent)> {
    match model {
        Model::Cir(m) => {
            let mut phis = 0.0;
            let mut psis = Vec::with_capacity(m.dim());
            for (factor, u) in m.factors.iter().zip(m.discount_loadings()) {
                let (phi, psi) = cir_riccati(tau, u, factor)?;
                phis += phi;
                psis.push(psi);
            }
            Ok((phis, TenorExponent::Vector(psis)))
        }
        Model::Wishart(m) => {
            let (phi, psi) = wishart_riccati(tau, &m.discount_loading(), m)?;
            Ok((phi, TenorExponent::Matrix(psi)))
        }
    }
}
