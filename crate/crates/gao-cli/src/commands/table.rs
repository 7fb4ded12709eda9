//! Built-in reproduction grids. Each table ships its sweep values, the
//! simulation count of the published run and a quadrature rule adequate for
//! its transform decay, so reproduction is a single command with no
//! external files.

use std::path::PathBuf;

use rayon::prelude::*;

use gao_core::affine::Model;
use gao_core::bounds::DampingSpec;
use gao_core::measure::MeasureConvention;
use gao_core::montecarlo::{Estimator, McConfig};
use gao_core::numerics::QuadratureRule;
use gao_core::reference;

use crate::commands::{compute_row, price::write_rows};
use crate::row::{print_timings, ResultRow};
use crate::{CliError, Overrides};

pub struct TableSpec {
    pub grid: Vec<f64>,
    pub default_sims: usize,
    pub rule: QuadratureRule,
}

pub fn builtin(id: u8) -> Result<TableSpec, CliError> {
    let spec = match id {
        2 => TableSpec {
            grid: reference::table2_m2_grid(),
            default_sims: 50_000,
            rule: QuadratureRule::default(),
        },
        3 => TableSpec {
            grid: reference::x12_grid(),
            default_sims: 20_000,
            // the Wishart transform decays slowly in eta; carry the tail far
            // enough to resolve the near-zero bound gap
            rule: QuadratureRule::new(5.0, 64, 5000.0, 1e-14)
                .expect("static rule parameters are valid"),
        },
        4 => TableSpec {
            grid: reference::x12_grid(),
            default_sims: 20_000,
            rule: QuadratureRule::default(),
        },
        5 => TableSpec {
            grid: reference::table5_q12_grid(),
            default_sims: 20_000,
            rule: QuadratureRule::default(),
        },
        other => return Err(CliError::Config(format!("unknown table id {other}; expected 2-5"))),
    };
    Ok(spec)
}

fn model_for(id: u8, sweep_value: f64) -> gao_core::Result<Model> {
    match id {
        2 => Ok(Model::Cir(reference::mcir_model(sweep_value)?)),
        3 => Ok(Model::Wishart(reference::wishart_example1(sweep_value)?)),
        4 => Ok(Model::Wishart(reference::wishart_example2(sweep_value)?)),
        _ => Ok(Model::Wishart(reference::wishart_example3(sweep_value)?)),
    }
}

pub fn run(
    id: u8,
    sims: Option<usize>,
    seed: Option<u64>,
    out: Option<&PathBuf>,
    overrides: &Overrides,
) -> Result<(), CliError> {
    let spec = builtin(id)?;
    let contract = reference::contract();
    let damping = DampingSpec::new(overrides.delta.unwrap_or(1.5))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut rule = spec.rule.clone();
    if let Some(w) = overrides.panel_width {
        rule.panel_width = w;
    }
    if let Some(p) = overrides.quad_points {
        rule.points_per_panel = p;
    }
    if let Some(m) = overrides.eta_max {
        rule.eta_max = m;
    }
    let convention = overrides.measure.map(Into::into).unwrap_or(MeasureConvention::Reference);
    let n_sims = sims.unwrap_or(spec.default_sims);
    let mc_cfg = if n_sims == 0 {
        None
    } else {
        Some(
            McConfig::new(
                n_sims,
                seed.unwrap_or(42),
                overrides.estimator.map(Into::into).unwrap_or(Estimator::DirectTerminal),
                overrides.steps_per_year.unwrap_or(200),
            )
            .map_err(|e| CliError::Config(e.to_string()))?,
        )
    };

    let rows: Vec<ResultRow> = spec
        .grid
        .par_iter()
        .map(|value| match model_for(id, *value) {
            Ok(model) => compute_row(
                &model,
                &contract,
                convention,
                &damping,
                &rule,
                mc_cfg.as_ref(),
                Some(*value),
            ),
            Err(e) => ResultRow {
                sweep_value: Some(*value),
                reason: format!("model: {e}"),
                ..Default::default()
            },
        })
        .collect();

    write_rows(out, &rows)?;
    print_timings(&rows);
    Ok(())
}
