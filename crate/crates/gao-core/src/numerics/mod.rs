//! Shared numerical kernels: dense matrix algebra, the matrix exponential,
//! fixed-step RK4 integration and Gauss-Legendre panel quadrature.
//!
//! All operations are pure functions of their inputs and safe to call from
//! any number of threads.

mod complex;
mod expm;
mod matrix;
mod ode;
mod quad;

pub use complex::ComplexMatrix;
pub use expm::matrix_exp;
pub use matrix::{jacobi_eigen, LuFactors, Matrix, PsdMatrix, SymMatrix, TOL_PSD};
pub use ode::{default_steps, rk4_integrate, OdeState};
pub use quad::{gauss_legendre, integrate_semi_infinite, QuadratureRule, SemiInfiniteIntegral};
