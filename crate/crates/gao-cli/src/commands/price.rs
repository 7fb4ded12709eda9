use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::commands::compute_row;
use crate::config::RunConfig;
use crate::row::{print_timings, write_csv, ResultRow};
use crate::{CliError, Overrides};

pub fn run(config_path: &Path, out: Option<&PathBuf>, overrides: &Overrides) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let mut config = RunConfig::parse(&text)?;
    overrides.apply(&mut config);

    let contract = config.contract()?;
    let damping = config.damping()?;
    let rule = config.quadrature()?;
    let mc_cfg = config.mc_config()?;
    let convention = config.measure.into();

    let points = config.sweep_points();
    let rows: Vec<ResultRow> = points
        .par_iter()
        .map(|sweep_value| match config.model_at(*sweep_value) {
            Ok(model) => compute_row(
                &model,
                &contract,
                convention,
                &damping,
                &rule,
                mc_cfg.as_ref(),
                *sweep_value,
            ),
            Err(e) => ResultRow {
                sweep_value: *sweep_value,
                reason: format!("model: {e}"),
                ..Default::default()
            },
        })
        .collect();

    write_rows(out, &rows)?;
    print_timings(&rows);

    // a single-point price is strict about numerical failures
    if let Some(row) = rows.iter().find(|r| r.gao_lb.is_none()) {
        return Err(CliError::Numerical(format!(
            "row sweep={:?} failed: {}",
            row.sweep_value, row.reason
        )));
    }
    Ok(())
}

pub(crate) fn write_rows(out: Option<&PathBuf>, rows: &[ResultRow]) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            write_csv(file, rows).map_err(|e| CliError::Io(e.to_string()))
        }
        None => write_csv(std::io::stdout().lock(), rows).map_err(|e| CliError::Io(e.to_string())),
    }
}
