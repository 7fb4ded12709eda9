use std::fs;
use std::path::Path;

use gao_core::validate::{run_validate, ValidateOptions};

use crate::config::RunConfig;
use crate::{CliError, Overrides};

/// Runs the invariant suite for the configured model. Exit code 4 signals
/// failed checks (reported in the JSON body, not as a hard error).
pub fn run(config_path: &Path, overrides: &Overrides) -> Result<bool, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let mut config = RunConfig::parse(&text)?;
    overrides.apply(&mut config);

    let contract = config.contract()?;
    let model = config.model_at(None)?;
    let mut opts = ValidateOptions::default();
    if let Some(mc) = &config.mc {
        opts.seed = mc.seed;
        opts.steps_per_year = mc.n_steps_per_year;
        if mc.n_sims > 0 {
            opts.oracle_paths = mc.n_sims.clamp(1_000, 50_000);
            opts.transform_draws = mc.n_sims.max(10_000);
        }
    }
    let report = run_validate(&model, &contract, &opts)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?
    );
    Ok(report.all_passed())
}
