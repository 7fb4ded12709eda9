//! Built-in reference configurations: the contract, the three-factor
//! square-root model and the three Wishart examples behind the shipped
//! reference tables, with their sweep grids.

use crate::affine::{CirFactor, CirModel, ContractSpec, Model, WishartModel};
use crate::bounds::calibrate_m3;
use crate::error::Result;
use crate::measure::{build_setup, MeasureConvention, PricingSetup};
use crate::numerics::{Matrix, PsdMatrix, SymMatrix};

/// Expected mortality level the third loading is calibrated to.
pub const MORTALITY_TARGET: f64 = 0.0125;

/// `g = 11.1%`, `T = 15`, `n = 35`.
pub fn contract() -> ContractSpec {
    ContractSpec::new(0.111, 15, 35).expect("reference contract is valid")
}

fn mcir_factors() -> Vec<CirFactor> {
    vec![
        CirFactor { k: 0.3731, theta: 0.074484, sigma: 0.0452, x0: 0.0510234 },
        CirFactor { k: 0.011, theta: 0.245455, sigma: 0.0368, x0: 0.0890707 },
        CirFactor { k: 0.01, theta: 0.0013, sigma: 0.0015, x0: 0.0004 },
    ]
}

/// Three-factor model with `r = r_bar + X1 + X2`, `mu = m2 X2 + m3 X3`, the
/// third loading calibrated to [`MORTALITY_TARGET`] at the horizon.
pub fn mcir_model(m2: f64) -> Result<CirModel> {
    let skeleton = CirModel::new(
        mcir_factors(),
        -0.12332,
        0.0,
        vec![1.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0],
    )?;
    let m3 = calibrate_m3(&skeleton, MORTALITY_TARGET, m2, f64::from(contract().maturity()))?;
    CirModel::new(
        mcir_factors(),
        -0.12332,
        0.0,
        vec![1.0, 1.0, 0.0],
        vec![0.0, m2, m3],
    )
}

fn wishart_base(q: Matrix, x0: PsdMatrix) -> Result<WishartModel> {
    WishartModel::new(
        3.0,
        Matrix::from_rows(&[vec![-0.5, 0.4], vec![0.007, -0.008]]),
        q,
        x0,
        0.04,
        0.0,
        SymMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]])?,
        SymMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]])?,
    )
}

fn x0_with_offdiag(x12: f64) -> Result<PsdMatrix> {
    PsdMatrix::from_rows(&[vec![0.01, x12], vec![x12, 0.001]])
}

/// Negative off-diagonal volatility, initial state swept in `X0_12`.
pub fn wishart_example1(x12: f64) -> Result<WishartModel> {
    wishart_base(
        Matrix::from_rows(&[vec![0.06, -0.0006], vec![-0.06, 0.006]]),
        x0_with_offdiag(x12)?,
    )
}

/// Positive off-diagonal volatility, initial state swept in `X0_12`.
pub fn wishart_example2(x12: f64) -> Result<WishartModel> {
    wishart_base(
        Matrix::from_rows(&[vec![0.06, 0.00001], vec![0.0002, 0.006]]),
        x0_with_offdiag(x12)?,
    )
}

/// Symmetric volatility swept in `Q_12`, fixed initial state.
pub fn wishart_example3(q12: f64) -> Result<WishartModel> {
    wishart_base(
        Matrix::from_rows(&[vec![0.06, q12], vec![q12, 0.006]]),
        PsdMatrix::from_rows(&[vec![0.01, 0.001], vec![0.001, 0.001]])?,
    )
}

/// Sweep grid of the `m2` loading (table 2).
pub fn table2_m2_grid() -> Vec<f64> {
    vec![
        -0.300, -0.100, -0.070, -0.060, -0.050, -0.040, -0.030, -0.020, -0.010, -0.001, 0.000,
        0.001, 0.010, 0.020, 0.030, 0.040, 0.050, 0.060, 0.070, 0.100,
    ]
}

/// Sweep grid of the initial off-diagonal `X0_12` (tables 3 and 4).
pub fn x12_grid() -> Vec<f64> {
    vec![-0.003, -0.002, -0.0015, -0.0005, 0.0, 0.0005, 0.0015, 0.002, 0.003]
}

/// Sweep grid of the volatility off-diagonal `Q_12` (table 5).
pub fn table5_q12_grid() -> Vec<f64> {
    vec![-0.01, -0.006, -0.002, 0.002, 0.006, 0.01]
}

/// Ready pricing setup for one table-2 row.
pub fn table2_setup(m2: f64, convention: MeasureConvention) -> Result<PricingSetup> {
    build_setup(&Model::Cir(mcir_model(m2)?), &contract(), convention)
}

/// Ready pricing setup for a Wishart example row.
pub fn wishart_setup(
    example: u8,
    sweep_value: f64,
    convention: MeasureConvention,
) -> Result<PricingSetup> {
    let model = match example {
        1 => wishart_example1(sweep_value)?,
        2 => wishart_example2(sweep_value)?,
        3 => wishart_example3(sweep_value)?,
        other => {
            return Err(crate::error::Error::invalid(format!(
                "unknown Wishart example {other}"
            )))
        }
    };
    build_setup(&Model::Wishart(model), &contract(), convention)
}
