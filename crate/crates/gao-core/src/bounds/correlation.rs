//! Instantaneous linear correlation between the rate and mortality
//! processes implied by the factor loadings at time zero.

use crate::affine::Model;
use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Correlation of `dr` and `dmu` evaluated on the initial state.
///
/// For the square-root family the quadratic covariations are diagonal in
/// the factors:
///
/// ```text
/// rho_0 = sum_i R_i M_i sigma_i^2 X_i0
///         / sqrt(sum_i R_i^2 sigma_i^2 X_i0) / sqrt(sum_i M_i^2 sigma_i^2 X_i0)
/// ```
///
/// For the Wishart family `d<Tr[A X], Tr[B X]> = 4 Tr[A X B Q^T Q] dt`, so
/// the scale-free ratio uses those traces at `X = x0`.
pub fn initial_correlation(model: &Model) -> Result<f64> {
    match model {
        Model::Cir(m) => {
            let mut num = 0.0;
            let mut var_r = 0.0;
            let mut var_m = 0.0;
            for ((f, r), mm) in m.factors.iter().zip(&m.rate_loadings).zip(&m.mortality_loadings)
            {
                let s2x = f.sigma * f.sigma * f.x0;
                num += r * mm * s2x;
                var_r += r * r * s2x;
                var_m += mm * mm * s2x;
            }
            if var_r <= 0.0 || var_m <= 0.0 {
                return Err(Error::UndefinedCorrelation(
                    "a diffusion term of rate or mortality vanishes at time zero".into(),
                ));
            }
            Ok(num / (var_r.sqrt() * var_m.sqrt()))
        }
        Model::Wishart(m) => {
            let qtq = m.qtq();
            let x0 = m.x0.as_matrix();
            let cov = |a: &Matrix, b: &Matrix| a.matmul(x0).matmul(b).matmul(&qtq).trace();
            let r = m.rate_loading.as_matrix();
            let mm = m.mortality_loading.as_matrix();
            let var_r = cov(r, r);
            let var_m = cov(mm, mm);
            if var_r <= 0.0 || var_m <= 0.0 {
                return Err(Error::UndefinedCorrelation(
                    "a diffusion term of rate or mortality vanishes at time zero".into(),
                ));
            }
            Ok(cov(r, mm) / (var_r.sqrt() * var_m.sqrt()))
        }
    }
}
