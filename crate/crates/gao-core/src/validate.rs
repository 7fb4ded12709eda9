//! Machine-readable validation suite: every structural invariant the engine
//! relies on, executed against a concrete model configuration.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::{cir_riccati, wishart_riccati, ContractSpec, Model, TenorExponent};
use crate::bounds::{fourier_geometric_call, DampingSpec};
use crate::error::Result;
use crate::measure::{
    build_setup, rn_path_expectation, MeasureConvention, PathConfig, TerminalState,
    BOND_IDENTITY_TOL,
};
use crate::montecarlo::{mc_gao_price, Estimator, McConfig};
use crate::numerics::{
    default_steps, matrix_exp, rk4_integrate, Matrix, QuadratureRule,
};

#[derive(Clone, Debug, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    /// Observed residual or statistic.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidateOptions {
    pub transform_draws: usize,
    pub oracle_paths: usize,
    pub steps_per_year: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { transform_draws: 100_000, oracle_paths: 20_000, steps_per_year: 200, seed: 42 }
    }
}

fn check(name: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> ValidationCheck {
    ValidationCheck {
        name: name.to_string(),
        passed: value <= tolerance,
        value,
        tolerance,
        detail: detail.into(),
    }
}

/// Runs the full invariant suite for one configuration.
pub fn run_validate(
    model: &Model,
    contract: &ContractSpec,
    opts: &ValidateOptions,
) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    checks.push(riccati_vs_ode(model)?);
    checks.push(matrix_exp_rotation());
    checks.push(rk4_order());

    let forward = build_setup(model, contract, MeasureConvention::Forward)?;
    checks.push(check(
        "bond_consistency_forward",
        forward.max_identity_residual(),
        BOND_IDENTITY_TOL,
        "max relative residual of P(0,T) E~[S_T^(i)] = P(0,T+i) over all tenors",
    ));
    let reference = build_setup(model, contract, MeasureConvention::Reference)?;
    notes.push(format!(
        "reference-convention identity residual (informational): {:.3e}",
        reference.max_identity_residual()
    ));

    checks.push(quadrature_self_convergence(&forward)?);
    checks.extend(transform_vs_sampler(&forward, opts)?);
    checks.push(rn_weight_normalization(model, contract, opts)?);
    checks.push(estimator_agreement(&forward, opts)?);

    Ok(ValidationReport { checks, notes })
}

/// Closed-form Riccati solutions against RK4 on a tenor grid.
fn riccati_vs_ode(model: &Model) -> Result<ValidationCheck> {
    let mut worst: f64 = 0.0;
    let taus: Vec<f64> = std::iter::once(0.5).chain((1..=34).map(f64::from)).collect();
    match model {
        Model::Cir(m) => {
            for (factor, u) in m.factors.iter().zip(m.discount_loadings()) {
                if factor.sigma == 0.0 {
                    continue;
                }
                for &tau in &taus {
                    let (phi, psi) = cir_riccati(tau, u, factor)?;
                    let y = rk4_integrate(
                        |_, y: &Vec<f64>| {
                            vec![
                                factor.k * factor.theta * y[1],
                                u - factor.k * y[1]
                                    - 0.5 * factor.sigma * factor.sigma * y[1] * y[1],
                            ]
                        },
                        0.0,
                        tau,
                        vec![0.0, 0.0],
                        default_steps(tau),
                    )?;
                    worst = worst.max((phi - y[0]).abs()).max((psi - y[1]).abs());
                }
            }
        }
        Model::Wishart(m) => {
            let u = m.discount_loading();
            let qtq = m.qtq();
            let ht = m.h.transpose();
            for &tau in &taus {
                let (phi, psi) = wishart_riccati(tau, &u, m)?;
                let (phi_ode, psi_ode) = rk4_integrate(
                    |_, state: &(f64, Matrix)| {
                        let p = &state.1;
                        let mut dp = p.matmul(&m.h).add(&ht.matmul(p));
                        dp = dp.sub(&p.matmul(&qtq).matmul(p).scaled(2.0));
                        dp.axpy_inplace(1.0, u.as_matrix());
                        (m.beta * qtq.matmul(p).trace(), dp)
                    },
                    0.0,
                    tau,
                    (0.0, Matrix::zeros(m.dim(), m.dim())),
                    default_steps(tau),
                )?;
                worst = worst.max((phi - phi_ode).abs());
                worst = worst.max(psi.as_matrix().sub(&psi_ode).max_abs());
            }
        }
    }
    Ok(check("riccati_closed_form_vs_ode", worst, 1e-8, "max |closed form - RK4| over the tenor grid"))
}

fn matrix_exp_rotation() -> ValidationCheck {
    let g = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).scaled(std::f64::consts::PI);
    let e = matrix_exp(&g).expect("finite input");
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { -1.0 } else { 0.0 };
            worst = worst.max((e[(i, j)] - expect).abs());
        }
    }
    check("matrix_exp_rotation_identity", worst, 1e-10, "exp(pi J) = -I entrywise")
}

fn rk4_order() -> ValidationCheck {
    let f = |t: f64, y: &f64| t.cos() * *y;
    let exact = 1f64.sin().exp();
    let err = |steps| (rk4_integrate(f, 0.0, 1.0, 1.0, steps).unwrap() - exact).abs();
    let ratio = err(50) / err(100);
    ValidationCheck {
        name: "rk4_halving_order".into(),
        passed: (8.0..=32.0).contains(&ratio),
        value: ratio,
        tolerance: 32.0,
        detail: "error ratio between N and 2N steps should sit near 16".into(),
    }
}

/// Halving the panel width must leave the Fourier call unchanged.
fn quadrature_self_convergence(setup: &crate::measure::PricingSetup) -> Result<ValidationCheck> {
    let damping = DampingSpec::default();
    let coarse = fourier_geometric_call(setup, &damping, &QuadratureRule::default())?;
    let fine_rule = QuadratureRule::new(2.5, 64, 200.0, 1e-12)?;
    let fine = fourier_geometric_call(setup, &damping, &fine_rule)?;
    Ok(check(
        "quadrature_panel_halving",
        (coarse.value - fine.value).abs(),
        1e-8,
        "Fourier call change under panel halving",
    ))
}

/// Empirical Laplace transforms of the sampled terminal law against the
/// closed forms at three tenor exponents.
fn transform_vs_sampler(
    setup: &crate::measure::PricingSetup,
    opts: &ValidateOptions,
) -> Result<Vec<ValidationCheck>> {
    let n = setup.curve.tenors.len();
    let picks = [0usize, n / 2, n - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let draws: Vec<TerminalState> = (0..opts.transform_draws)
        .map(|_| setup.law.sample(&mut rng))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &idx in &picks {
        let point = &setup.curve.tenors[idx];
        let exact = setup.law.exponent_laplace(&point.psi)?;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for d in &draws {
            let expo = match (&point.psi, d) {
                (TenorExponent::Vector(v), TerminalState::Cir(x)) => {
                    v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
                }
                (TenorExponent::Matrix(mm), TerminalState::Wishart(x)) => {
                    mm.as_matrix().frobenius_dot(x)
                }
                _ => f64::NAN,
            };
            let val = (-expo).exp();
            sum += val;
            sumsq += val * val;
        }
        let nn = draws.len() as f64;
        let mean = sum / nn;
        let se = (((sumsq - sum * sum / nn) / (nn - 1.0)).max(0.0) / nn).sqrt();
        out.push(ValidationCheck {
            name: format!("transform_vs_sampler_tenor_{}", point.tenor),
            passed: (mean - exact).abs() <= 4.0 * se.max(1e-300),
            value: (mean - exact).abs(),
            tolerance: 4.0 * se,
            detail: format!("empirical {mean:.9} vs closed form {exact:.9}"),
        });
    }
    Ok(out)
}

/// `E[exp(-int (r+mu)) / P(0,T)] = 1`.
fn rn_weight_normalization(
    model: &Model,
    contract: &ContractSpec,
    opts: &ValidateOptions,
) -> Result<ValidationCheck> {
    let cfg = PathConfig::new(opts.oracle_paths, opts.steps_per_year, opts.seed)?;
    let (mean, se) =
        rn_path_expectation(model, f64::from(contract.maturity()), |_| 1.0, &cfg)?;
    Ok(ValidationCheck {
        name: "rn_weight_normalization".into(),
        passed: (mean - 1.0).abs() <= 3.0 * se,
        value: (mean - 1.0).abs(),
        tolerance: 3.0 * se,
        detail: format!("mean weight {mean:.6} (se {se:.2e})"),
    })
}

/// Direct-terminal and path estimators agree within four combined standard
/// errors under the forward convention.
fn estimator_agreement(
    setup: &crate::measure::PricingSetup,
    opts: &ValidateOptions,
) -> Result<ValidationCheck> {
    let direct = mc_gao_price(
        setup,
        &McConfig::new(
            opts.transform_draws.max(100),
            opts.seed,
            Estimator::DirectTerminal,
            opts.steps_per_year,
        )?,
    )?;
    let path = mc_gao_price(
        setup,
        &McConfig::new(opts.oracle_paths.max(100), opts.seed, Estimator::RnPath, opts.steps_per_year)?,
    )?;
    let combined = (direct.std_error.powi(2) + path.std_error.powi(2)).sqrt();
    Ok(ValidationCheck {
        name: "estimator_agreement".into(),
        passed: (direct.estimate - path.estimate).abs() <= 4.0 * combined,
        value: (direct.estimate - path.estimate).abs(),
        tolerance: 4.0 * combined,
        detail: format!(
            "direct {:.6} (se {:.2e}) vs path {:.6} (se {:.2e})",
            direct.estimate, direct.std_error, path.estimate, path.std_error
        ),
    })
}

/// Self-convergence helper used by acceptance tests: value of the damped
/// Fourier integral of the geometric-average transform for this setup.
pub fn fourier_integral_value(
    setup: &crate::measure::PricingSetup,
    rule: &QuadratureRule,
    delta: f64,
) -> Result<Complex64> {
    let damping = DampingSpec::new(delta)?;
    let call = fourier_geometric_call(setup, &damping, rule)?;
    Ok(Complex64::new(call.value, 0.0))
}
