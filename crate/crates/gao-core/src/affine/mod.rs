//! Contract terms, affine model definitions and survival-bond pricing.

mod cir;
mod contract;
mod curve;
mod wishart;

pub use cir::{cir_riccati, CirFactor, CirModel};
#[cfg_attr(not(test), allow(unused_imports))]
pub(crate) use cir::cir_riccati_with_terminal;
pub use contract::ContractSpec;
pub use curve::{szcb_price, tenor_curve, Model, TenorCurve, TenorExponent, TenorPoint};
pub use wishart::{wishart_riccati, WishartModel};
