use crate::affine::CirModel;
use crate::error::{Error, Result};

/// Solves for the third mortality loading so that the expected mortality
/// intensity at the horizon hits `target`:
/// `m3 = (target - mu_bar - m2 E[X_2ated]) / E[X_3T]`.
///
/// Applies to the three-factor layout with rate loadings `(1, 1, 0)` and
/// mortality loadings `(0, m2, m3)`.
pub fn calibrate_m3(model: &CirModel, target: f64, m2: f64, horizon: f64) -> Result<f64> {
    if model.dim() != 3 {
        return Err(Error::Calibration(format!(
            "mortality calibration needs the three-factor layout, model has {} factors",
            model.dim()
        )));
    }
    let e2 = model.factors[1].mean_at(horizon);
    let e3 = model.factors[2].mean_at(horizon);
    if e3.abs() < 1e-300 {
        return Err(Error::Calibration(
            "third factor has vanishing expected value at the horizon".into(),
        ));
    }
    Ok((target - model.mu_bar - m2 * e2) / e3)
}
