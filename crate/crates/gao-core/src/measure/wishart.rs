//! Terminal law of the Wishart state under the pricing measure.
//!
//! The law is non-central Wishart with scale `V(0)` and mean-propagation
//! matrix `psi(0)` obtained from the backward linear system
//!
//! ```text
//! d psi / dt = -Hd(t)^T psi,          psi(T) = I
//! d V / dt   = -psi^T Q^T Q psi,      V(T) = 0
//! ```
//!
//! integrated in reversed time `s = T - t`, where the drift correction
//! `Hd(t) = H - a Q^T Q psi_riccati(T - t, R + M)` carries the measure
//! change. The Girsanov drift of the numeraire change has `a = 2`; the
//! closed-form methodology behind the shipped reference tables uses `a = 1`
//! together with the linear-Theta trace form, and both are kept available
//! through [`MeasureConvention`].

use crate::affine::{wishart_riccati, WishartModel};
use crate::distributions::{NoncentralWishartLaw, TraceForm};
use crate::error::{Error, Result};
use crate::measure::MeasureConvention;
use crate::numerics::{default_steps, rk4_integrate, Matrix, PsdMatrix, SymMatrix};

#[derive(Clone, Debug)]
pub struct WishartTransformedLaw {
    /// Backward mean-propagation solution `psi(0)`.
    pub psi0: Matrix,
    /// Accumulated covariance scale `V(0)`.
    pub v0: PsdMatrix,
    pub law: NoncentralWishartLaw,
    pub convention: MeasureConvention,
}

pub fn wishart_transformed_law(
    model: &WishartModel,
    horizon: f64,
    convention: MeasureConvention,
) -> Result<WishartTransformedLaw> {
    if !(horizon > 0.0) {
        return Err(Error::invalid("law horizon must be positive"));
    }
    let drift_factor = match convention {
        MeasureConvention::Forward => 2.0,
        MeasureConvention::Reference => 1.0,
    };
    let steps = default_steps(horizon);
    let qtq = model.qtq();
    let discount = model.discount_loading();

    // Riccati exponents on the half-step grid the RK4 sweep visits.
    let half = horizon / (2 * steps) as f64;
    let mut psi_grid = Vec::with_capacity(2 * steps + 1);
    for i in 0..=(2 * steps) {
        let s = i as f64 * half;
        let (_, psi) = wishart_riccati(s, &discount, model)?;
        psi_grid.push(psi);
    }

    let (psi0, v0_raw) = integrate_terminal_system(
        &model.h,
        &qtq,
        |s| {
            let idx = (s / half).round() as usize;
            &psi_grid[idx.min(psi_grid.len() - 1)]
        },
        drift_factor,
        horizon,
        steps,
    )?;

    let v0 = PsdMatrix::new(SymMatrix::symmetrized(&v0_raw)?)
        .map_err(|e| Error::invalid(format!("integrated scale V(0) not PSD: {e}")))?;
    let omega_raw = psi0.transpose().matmul(model.x0.as_matrix()).matmul(&psi0);
    let omega = PsdMatrix::new(SymMatrix::symmetrized(&omega_raw)?)
        .map_err(|e| Error::invalid(format!("non-centrality not PSD: {e}")))?;
    let trace_form = match convention {
        MeasureConvention::Forward => TraceForm::Gaussian,
        MeasureConvention::Reference => TraceForm::LinearTheta,
    };
    let law = NoncentralWishartLaw::new(model.beta, v0.clone(), omega, trace_form)?;
    Ok(WishartTransformedLaw { psi0, v0, law, convention })
}

/// RK4 sweep of the reversed-time system. Exposed at crate level so the
/// no-noise limit can be exercised directly in tests.
pub(crate) fn integrate_terminal_system<'a, F>(
    h: &Matrix,
    qtq: &Matrix,
    psi_at: F,
    drift_factor: f64,
    horizon: f64,
    steps: usize,
) -> Result<(Matrix, Matrix)>
where
    F: Fn(f64) -> &'a SymMatrix,
{
    let d = h.rows();
    let deriv = |s: f64, state: &(Matrix, Matrix)| {
        let (phi, _) = state;
        let mut hd = h.clone();
        hd.axpy_inplace(-drift_factor, &qtq.matmul(psi_at(s).as_matrix()));
        let dphi = hd.transpose().matmul(phi);
        let dv = phi.transpose().matmul(qtq).matmul(phi);
        (dphi, dv)
    };
    let (psi0, v0) = rk4_integrate(
        deriv,
        0.0,
        horizon,
        (Matrix::identity(d), Matrix::zeros(d, d)),
        steps,
    )?;
    Ok((psi0, v0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix_exp;
    use approx::assert_abs_diff_eq;

    fn example1_model(x12: f64) -> WishartModel {
        WishartModel::new(
            3.0,
            Matrix::from_rows(&[vec![-0.5, 0.4], vec![0.007, -0.008]]),
            Matrix::from_rows(&[vec![0.06, -0.0006], vec![-0.06, 0.006]]),
            PsdMatrix::from_rows(&[vec![0.01, x12], vec![x12, 0.001]]).unwrap(),
            0.04,
            0.0,
            SymMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap(),
            SymMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        )
        .unwrap()
    }

    /// With `Q = 0` the system is linear with constant coefficients:
    /// `V(0) = 0` and `psi(0) = exp(T H^T)`.
    #[test]
    fn no_noise_limit() {
        let h = Matrix::from_rows(&[vec![-0.5, 0.4], vec![0.007, -0.008]]);
        let zero = SymMatrix::zeros(2);
        let (psi0, v0) = integrate_terminal_system(
            &h,
            &Matrix::zeros(2, 2),
            |_| &zero,
            2.0,
            15.0,
            3000,
        )
        .unwrap();
        let exact = matrix_exp(&h.transpose().scaled(15.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(psi0[(i, j)], exact[(i, j)], epsilon = 1e-10);
                assert_abs_diff_eq!(v0[(i, j)], 0.0, epsilon = 0.0);
            }
        }
    }

    /// As the horizon shrinks the law collapses onto the initial state:
    /// `psi(0) -> I`, `V(0) -> 0`, so the Laplace transform approaches
    /// `exp(-Tr[U x0])`.
    #[test]
    fn short_horizon_collapses_to_initial_state() {
        let model = example1_model(0.0);
        let tl = wishart_transformed_law(&model, 0.001, MeasureConvention::Forward).unwrap();
        // V(0) accumulates roughly T * Q^T Q
        assert!(tl.v0.as_matrix().max_abs() < 1e-5);
        let u = SymMatrix::from_rows(&[vec![1.0, 0.2], vec![0.2, 0.5]]).unwrap();
        let lap = tl.law.laplace(&u).unwrap();
        let point = (-u.as_matrix().frobenius_dot(model.x0.as_matrix())).exp();
        assert_abs_diff_eq!(lap, point, epsilon = 1e-4);
    }

    #[test]
    fn conventions_pick_their_trace_forms() {
        let model = example1_model(0.001);
        let fwd = wishart_transformed_law(&model, 15.0, MeasureConvention::Forward).unwrap();
        let rf = wishart_transformed_law(&model, 15.0, MeasureConvention::Reference).unwrap();
        assert_eq!(fwd.law.trace_form(), TraceForm::Gaussian);
        assert_eq!(rf.law.trace_form(), TraceForm::LinearTheta);
        // the drift factor genuinely changes the law
        let u = SymMatrix::identity(2).scaled(0.5);
        let a = fwd.law.laplace(&u).unwrap();
        let b = rf.law.laplace(&u).unwrap();
        assert!((a - b).abs() > 1e-8, "conventions should differ: {a} vs {b}");
    }
}
