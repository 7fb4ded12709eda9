//! Classical fixed-step RK4 over scalar, vector, matrix or tuple states.
//!
//! Fixed steps keep results bit-reproducible; the Riccati systems integrated
//! here are smooth and non-stiff at the parameter ranges of interest.

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;

/// State that can live inside the RK4 loop.
pub trait OdeState: Clone {
    /// `self += a * other`
    fn axpy(&mut self, a: f64, other: &Self);
    fn all_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn axpy(&mut self, a: f64, other: &Self) {
        *self += a * other;
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for Vec<f64> {
    fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (x, y) in self.iter_mut().zip(other) {
            *x += a * y;
        }
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl OdeState for Matrix {
    fn axpy(&mut self, a: f64, other: &Self) {
        self.axpy_inplace(a, other);
    }
    fn all_finite(&self) -> bool {
        Matrix::all_finite(self)
    }
}

impl<A: OdeState, B: OdeState> OdeState for (A, B) {
    fn axpy(&mut self, a: f64, other: &Self) {
        self.0.axpy(a, &other.0);
        self.1.axpy(a, &other.1);
    }
    fn all_finite(&self) -> bool {
        self.0.all_finite() && self.1.all_finite()
    }
}

impl<A: OdeState, B: OdeState, C: OdeState> OdeState for (A, B, C) {
    fn axpy(&mut self, a: f64, other: &Self) {
        self.0.axpy(a, &other.0);
        self.1.axpy(a, &other.1);
        self.2.axpy(a, &other.2);
    }
    fn all_finite(&self) -> bool {
        self.0.all_finite() && self.1.all_finite() && self.2.all_finite()
    }
}

/// Integrates `y' = deriv(t, y)` from `t0` to `t1` with `steps` RK4 steps.
pub fn rk4_integrate<S, F>(deriv: F, t0: f64, t1: f64, y0: S, steps: usize) -> Result<S>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    if steps == 0 {
        return Err(Error::invalid("rk4_integrate needs at least one step"));
    }
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for step in 0..steps {
        let t = t0 + h * step as f64;

        let k1 = deriv(t, &y);
        let mut y2 = y.clone();
        y2.axpy(0.5 * h, &k1);
        let k2 = deriv(t + 0.5 * h, &y2);
        let mut y3 = y.clone();
        y3.axpy(0.5 * h, &k2);
        let k3 = deriv(t + 0.5 * h, &y3);
        let mut y4 = y.clone();
        y4.axpy(h, &k3);
        let k4 = deriv(t + h, &y4);

        y.axpy(h / 6.0, &k1);
        y.axpy(h / 3.0, &k2);
        y.axpy(h / 3.0, &k3);
        y.axpy(h / 6.0, &k4);

        if !y.all_finite() {
            return Err(Error::NumericalBlowup { step, t: t + h });
        }
    }
    Ok(y)
}

/// Default step count for a horizon of `tau` years: 200 per year with a floor
/// of 200.
pub fn default_steps(tau: f64) -> usize {
    ((200.0 * tau).ceil() as usize).max(200)
}
