use crate::error::{Error, Result};

/// Guaranteed-annuity contract terms.
///
/// The option converts a unit cash amount at maturity `T` into an annuity at
/// the guaranteed rate `g`; with `n` annual payment dates the embedded basket
/// holds the `n - 1` survival bonds maturing after `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractSpec {
    g: f64,
    maturity: u32,
    payments: u32,
}

impl ContractSpec {
    pub fn new(g: f64, maturity: u32, payments: u32) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::invalid("conversion rate g must be positive"));
        }
        if maturity == 0 {
            return Err(Error::invalid("maturity must be a positive number of years"));
        }
        if payments < 2 {
            return Err(Error::invalid("need at least two annuity payment dates"));
        }
        Ok(ContractSpec { g, maturity, payments })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Option maturity `T` in years.
    pub fn maturity(&self) -> u32 {
        self.maturity
    }

    /// Number of annual annuity payment dates `n` (the date at `T` included).
    pub fn payments(&self) -> u32 {
        self.payments
    }

    /// Strike `K = 1/g`.
    pub fn strike(&self) -> f64 {
        1.0 / self.g
    }

    /// Number of survival bonds in the basket, `n - 1`.
    pub fn basket_size(&self) -> usize {
        (self.payments - 1) as usize
    }

    /// Effective basket strike `K - 1` (the time-`T` payment cancels one
    /// unit of the strike).
    pub fn basket_strike(&self) -> f64 {
        self.strike() - 1.0
    }

    /// Per-asset strike `K' = (K - 1)/(n - 1)` of the mean reformulation.
    pub fn mean_strike(&self) -> f64 {
        self.basket_strike() / self.basket_size() as f64
    }
}
