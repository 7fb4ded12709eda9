//! Matrix exponential by scaling-and-squaring with the order-13 Padé
//! approximant (Higham 2005). The matrices arising from the doubled-dimension
//! Riccati linearization are small and moderately normed, so the single
//! highest-order branch is used unconditionally.

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Computes `e^m` for a square real matrix.
pub fn matrix_exp(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::invalid("matrix exponential needs a square matrix"));
    }
    if !m.all_finite() {
        return Err(Error::invalid("matrix exponential of a non-finite matrix"));
    }
    let norm = m.norm_one();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = m.scaled(0.5f64.powi(squarings as i32));

    let n = a.rows();
    let ident = Matrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    // u = a (a6 (b13 a6 + b11 a4 + b9 a2) + b7 a6 + b5 a4 + b3 a2 + b1 I)
    let mut inner = a6.scaled(PADE_13[13]);
    inner.axpy_inplace(PADE_13[11], &a4);
    inner.axpy_inplace(PADE_13[9], &a2);
    let mut u = a6.matmul(&inner);
    u.axpy_inplace(PADE_13[7], &a6);
    u.axpy_inplace(PADE_13[5], &a4);
    u.axpy_inplace(PADE_13[3], &a2);
    u.axpy_inplace(PADE_13[1], &ident);
    let u = a.matmul(&u);

    // v = a6 (b12 a6 + b10 a4 + b8 a2) + b6 a6 + b4 a4 + b2 a2 + b0 I
    let mut inner = a6.scaled(PADE_13[12]);
    inner.axpy_inplace(PADE_13[10], &a4);
    inner.axpy_inplace(PADE_13[8], &a2);
    let mut v = a6.matmul(&inner);
    v.axpy_inplace(PADE_13[6], &a6);
    v.axpy_inplace(PADE_13[4], &a4);
    v.axpy_inplace(PADE_13[2], &a2);
    v.axpy_inplace(PADE_13[0], &ident);

    // r = (v - u)^{-1} (v + u)
    let mut result = v.sub(&u).solve(&v.add(&u))?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}
