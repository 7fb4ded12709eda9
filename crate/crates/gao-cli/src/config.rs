//! JSON run configuration: schema, strict validation and conversion into
//! engine types. Unknown keys are rejected everywhere so typos cannot be
//! silently absorbed.

use serde::Deserialize;

use gao_core::affine::{CirFactor, CirModel, ContractSpec, Model, WishartModel};
use gao_core::bounds::{calibrate_m3, DampingSpec};
use gao_core::measure::MeasureConvention;
use gao_core::montecarlo::{Estimator, McConfig};
use gao_core::numerics::{Matrix, PsdMatrix, QuadratureRule, SymMatrix};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub contract: ContractConfig,
    #[serde(default)]
    pub measure: MeasureChoice,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub mc: Option<McSection>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Mcir {
        factors: Vec<FactorConfig>,
        r_bar: f64,
        mu_bar: f64,
        rate_loadings: Vec<f64>,
        #[serde(default)]
        mortality_loadings: Option<Vec<f64>>,
        #[serde(default)]
        mortality_calibration: Option<MortalityCalibration>,
    },
    Wishart {
        beta: f64,
        r_bar: f64,
        mu_bar: f64,
        h: Vec<Vec<f64>>,
        q: Vec<Vec<f64>>,
        x0: Vec<Vec<f64>>,
        rate_loading: Vec<Vec<f64>>,
        mortality_loading: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub k: f64,
    pub theta: f64,
    pub sigma: f64,
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MortalityCalibration {
    pub m2: f64,
    /// Expected mortality level at the contract horizon.
    pub target: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractConfig {
    pub g: f64,
    #[serde(rename = "T")]
    pub maturity: u32,
    pub n: u32,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MeasureChoice {
    /// Convention of the shipped reference tables (default).
    #[default]
    Reference,
    /// Numeraire-consistent convention; satisfies the bond identity.
    Forward,
}

impl From<MeasureChoice> for MeasureConvention {
    fn from(c: MeasureChoice) -> Self {
        match c {
            MeasureChoice::Reference => MeasureConvention::Reference,
            MeasureChoice::Forward => MeasureConvention::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_panel_width")]
    pub panel_width: f64,
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
    #[serde(default = "default_eta_max")]
    pub eta_max: f64,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_delta() -> f64 {
    1.5
}
fn default_panel_width() -> f64 {
    5.0
}
fn default_quad_points() -> usize {
    64
}
fn default_eta_max() -> f64 {
    200.0
}
fn default_tail_tol() -> f64 {
    1e-12
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            delta: default_delta(),
            panel_width: default_panel_width(),
            quad_points: default_quad_points(),
            eta_max: default_eta_max(),
            tail_tol: default_tail_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub n_sims: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub estimator: EstimatorChoice,
    #[serde(default = "default_steps_per_year")]
    pub n_steps_per_year: usize,
}

fn default_seed() -> u64 {
    42
}
fn default_steps_per_year() -> usize {
    200
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorChoice {
    #[default]
    DirectTerminal,
    RnPath,
}

impl From<EstimatorChoice> for Estimator {
    fn from(c: EstimatorChoice) -> Self {
        match c {
            EstimatorChoice::DirectTerminal => Estimator::DirectTerminal,
            EstimatorChoice::RnPath => Estimator::RnPath,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
pub enum SweepParameter {
    #[serde(rename = "m2")]
    M2,
    #[serde(rename = "X0_12")]
    X012,
    #[serde(rename = "Q12")]
    Q12,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config: {e}")))?;
        config.validate_semantics()?;
        Ok(config)
    }

    fn validate_semantics(&self) -> Result<(), CliError> {
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(CliError::Config("sweep.values: must be non-empty".into()));
            }
            match (&self.model, sweep.parameter) {
                (ModelConfig::Mcir { mortality_calibration, .. }, SweepParameter::M2) => {
                    if mortality_calibration.is_none() {
                        return Err(CliError::Config(
                            "sweep.parameter: sweeping m2 needs model.mortality_calibration"
                                .into(),
                        ));
                    }
                }
                (ModelConfig::Wishart { .. }, SweepParameter::X012 | SweepParameter::Q12) => {}
                (_, p) => {
                    return Err(CliError::Config(format!(
                        "sweep.parameter: {p:?} does not apply to this model type"
                    )))
                }
            }
        }
        if let ModelConfig::Mcir { mortality_loadings, mortality_calibration, .. } = &self.model {
            match (mortality_loadings, mortality_calibration) {
                (None, None) => {
                    return Err(CliError::Config(
                        "model: one of mortality_loadings or mortality_calibration is required"
                            .into(),
                    ))
                }
                (Some(_), Some(_)) => {
                    return Err(CliError::Config(
                        "model: mortality_loadings and mortality_calibration are mutually exclusive"
                            .into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn contract(&self) -> Result<ContractSpec, CliError> {
        ContractSpec::new(self.contract.g, self.contract.maturity, self.contract.n)
            .map_err(|e| CliError::Config(format!("contract: {e}")))
    }

    pub fn quadrature(&self) -> Result<QuadratureRule, CliError> {
        QuadratureRule::new(
            self.bounds.panel_width,
            self.bounds.quad_points,
            self.bounds.eta_max,
            self.bounds.tail_tol,
        )
        .map_err(|e| CliError::Config(format!("bounds: {e}")))
    }

    pub fn damping(&self) -> Result<DampingSpec, CliError> {
        DampingSpec::new(self.bounds.delta).map_err(|e| CliError::Config(format!("bounds: {e}")))
    }

    pub fn mc_config(&self) -> Result<Option<McConfig>, CliError> {
        match &self.mc {
            None => Ok(None),
            Some(section) if section.n_sims == 0 => Ok(None),
            Some(section) => Ok(Some(
                McConfig::new(
                    section.n_sims,
                    section.seed,
                    section.estimator.into(),
                    section.n_steps_per_year,
                )
                .map_err(|e| CliError::Config(format!("mc: {e}")))?,
            )),
        }
    }

    /// Materializes the model, with the sweep parameter (if any) set to
    /// `sweep_value`.
    pub fn model_at(&self, sweep_value: Option<f64>) -> Result<Model, CliError> {
        let horizon = f64::from(self.contract.maturity);
        match &self.model {
            ModelConfig::Mcir {
                factors,
                r_bar,
                mu_bar,
                rate_loadings,
                mortality_loadings,
                mortality_calibration,
            } => {
                let factors: Vec<CirFactor> = factors
                    .iter()
                    .map(|f| CirFactor { k: f.k, theta: f.theta, sigma: f.sigma, x0: f.x0 })
                    .collect();
                let mortality = match (mortality_loadings, mortality_calibration) {
                    (Some(loadings), None) => {
                        if sweep_value.is_some() {
                            return Err(CliError::Config(
                                "sweep: m2 sweep needs mortality_calibration".into(),
                            ));
                        }
                        loadings.clone()
                    }
                    (None, Some(cal)) => {
                        let m2 = sweep_value.unwrap_or(cal.m2);
                        let skeleton = CirModel::new(
                            factors.clone(),
                            *r_bar,
                            *mu_bar,
                            rate_loadings.clone(),
                            vec![0.0; factors.len()],
                        )
                        .map_err(|e| CliError::Config(format!("model: {e}")))?;
                        let m3 = calibrate_m3(&skeleton, cal.target, m2, horizon)
                            .map_err(|e| CliError::Numerical(e.to_string()))?;
                        vec![0.0, m2, m3]
                    }
                    _ => unreachable!("validated in validate_semantics"),
                };
                CirModel::new(factors, *r_bar, *mu_bar, rate_loadings.clone(), mortality)
                    .map(Model::Cir)
                    .map_err(|e| CliError::Config(format!("model: {e}")))
            }
            ModelConfig::Wishart { beta, r_bar, mu_bar, h, q, x0, rate_loading, mortality_loading } => {
                let mut q = q.clone();
                let mut x0 = x0.clone();
                match (self.sweep.as_ref().map(|s| s.parameter), sweep_value) {
                    (Some(SweepParameter::Q12), Some(v)) => {
                        set_offdiag(&mut q, v, "model.q")?;
                    }
                    (Some(SweepParameter::X012), Some(v)) => {
                        set_offdiag(&mut x0, v, "model.x0")?;
                    }
                    _ => {}
                }
                let to_matrix = |rows: &Vec<Vec<f64>>, path: &str| -> Result<Matrix, CliError> {
                    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                        return Err(CliError::Config(format!("{path}: must be a square matrix")));
                    }
                    Ok(Matrix::from_rows(rows))
                };
                let to_sym = |rows: &Vec<Vec<f64>>, path: &str| -> Result<SymMatrix, CliError> {
                    SymMatrix::new(to_matrix(rows, path)?)
                        .map_err(|e| CliError::Config(format!("{path}: {e}")))
                };
                let x0 = PsdMatrix::new(to_sym(&x0, "model.x0")?)
                    .map_err(|e| CliError::Config(format!("model.x0: {e}")))?;
                WishartModel::new(
                    *beta,
                    to_matrix(h, "model.h")?,
                    to_matrix(&q, "model.q")?,
                    x0,
                    *r_bar,
                    *mu_bar,
                    to_sym(rate_loading, "model.rate_loading")?,
                    to_sym(mortality_loading, "model.mortality_loading")?,
                )
                .map(Model::Wishart)
                .map_err(|e| CliError::Config(format!("model: {e}")))
            }
        }
    }

    /// Sweep values, or a single `None` entry when no sweep is configured.
    pub fn sweep_points(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }
}

fn set_offdiag(rows: &mut [Vec<f64>], v: f64, path: &str) -> Result<(), CliError> {
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(CliError::Config(format!("{path}: off-diagonal sweep needs a 2x2 matrix")));
    }
    rows[0][1] = v;
    rows[1][0] = v;
    Ok(())
}
