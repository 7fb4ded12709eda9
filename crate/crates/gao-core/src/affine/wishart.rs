//! Wishart short-rate / mortality model and its matrix Riccati solution via
//! the doubled-dimension linearization.
//!
//! The state follows
//! `dX = (beta Q^T Q + H X + X H^T) dt + sqrt(X) dW Q + Q^T dW^T sqrt(X)`
//! on the cone of positive semidefinite matrices, with
//! `r = r_bar + Tr[R X]` and `mu = mu_bar + Tr[M X]`.

use crate::error::{Error, Result};
use crate::numerics::{matrix_exp, Matrix, PsdMatrix, SymMatrix};

const DET_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct WishartModel {
    pub beta: f64,
    pub h: Matrix,
    pub q: Matrix,
    pub x0: PsdMatrix,
    pub r_bar: f64,
    pub mu_bar: f64,
    pub rate_loading: SymMatrix,
    pub mortality_loading: SymMatrix,
}

impl WishartModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        beta: f64,
        h: Matrix,
        q: Matrix,
        x0: PsdMatrix,
        r_bar: f64,
        mu_bar: f64,
        rate_loading: SymMatrix,
        mortality_loading: SymMatrix,
    ) -> Result<Self> {
        let d = x0.dim();
        if !h.is_square() || h.rows() != d || !q.is_square() || q.rows() != d {
            return Err(Error::invalid("H and Q must be square with the state dimension"));
        }
        if rate_loading.dim() != d || mortality_loading.dim() != d {
            return Err(Error::invalid("loading matrices must match the state dimension"));
        }
        if beta < d as f64 - 1.0 {
            return Err(Error::invalid(format!("shape beta = {beta} must be at least d - 1")));
        }
        if q.det()?.abs() <= DET_TOL {
            return Err(Error::invalid("Q must be invertible"));
        }
        let model = WishartModel { beta, h, q, x0, r_bar, mu_bar, rate_loading, mortality_loading };
        // discount loading R + M must itself be PSD
        PsdMatrix::new(model.discount_loading())
            .map_err(|_| Error::invalid("R + M must be positive semidefinite"))?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn discount_loading(&self) -> SymMatrix {
        self.rate_loading.add(&self.mortality_loading)
    }

    pub fn qtq(&self) -> Matrix {
        self.q.transpose().matmul(&self.q)
    }
}

/// Solves the matrix Riccati system
///
/// ```text
/// psi' = psi H + H^T psi - 2 psi Q^T Q psi + U,   psi(0) = 0
/// phi' = Tr[beta Q^T Q psi],                      phi(0) = 0
/// ```
///
/// by exponentiating the doubled block matrix `[[H, 2 Q^T Q], [U, -H^T]]`:
/// `psi = A22^{-1} A21` and `phi = (beta/2)(log det A22 + tau Tr[H^T])`.
pub fn wishart_riccati(tau: f64, u: &SymMatrix, model: &WishartModel) -> Result<(f64, SymMatrix)> {
    if tau < 0.0 {
        return Err(Error::invalid("horizon must be non-negative"));
    }
    let d = model.dim();
    if u.dim() != d {
        return Err(Error::invalid("exponent dimension mismatch"));
    }
    if tau == 0.0 {
        return Ok((0.0, SymMatrix::zeros(d)));
    }
    let qtq2 = model.qtq().scaled(2.0);
    let mut block = Matrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            block[(i, j)] = model.h[(i, j)];
            block[(i, j + d)] = qtq2[(i, j)];
            block[(i + d, j)] = u[(i, j)];
            block[(i + d, j + d)] = -model.h[(j, i)];
        }
    }
    let big = matrix_exp(&block.scaled(tau))?;
    let mut a21 = Matrix::zeros(d, d);
    let mut a22 = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            a21[(i, j)] = big[(i + d, j)];
            a22[(i, j)] = big[(i + d, j + d)];
        }
    }
    let det = a22.det()?;
    if det.abs() <= DET_TOL {
        return Err(Error::LinearizationBreakdown { tau, det });
    }
    if det <= 0.0 {
        // log det undefined; the linearization has crossed a branch
        return Err(Error::LinearizationBreakdown { tau, det });
    }
    let psi_raw = a22.solve(&a21)?;
    // floating-point asymmetry would otherwise leak into trace expressions
    let psi = SymMatrix::symmetrized(&psi_raw)?;
    let phi = 0.5 * model.beta * (det.ln() + tau * model.h.trace());
    Ok((phi, psi))
}
