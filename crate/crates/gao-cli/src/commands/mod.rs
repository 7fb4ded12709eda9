pub mod price;
pub mod table;
pub mod validate;

use std::time::Instant;

use gao_core::affine::{ContractSpec, Model};
use gao_core::bounds::{compute_bounds, DampingSpec};
use gao_core::measure::{build_setup, MeasureConvention};
use gao_core::montecarlo::{mc_bracket_check, mc_gao_price, McConfig};
use gao_core::numerics::QuadratureRule;

use crate::row::ResultRow;

/// Evaluates one configuration into a result row. Numerical failures do not
/// abort the sweep; they land in the row's reason column.
pub fn compute_row(
    model: &Model,
    contract: &ContractSpec,
    convention: MeasureConvention,
    damping: &DampingSpec,
    rule: &QuadratureRule,
    mc_cfg: Option<&McConfig>,
    sweep_value: Option<f64>,
) -> ResultRow {
    let mut row = ResultRow { sweep_value, ..Default::default() };
    let setup = match build_setup(model, contract, convention) {
        Ok(s) => s,
        Err(e) => {
            row.reason = format!("setup: {e}");
            return row;
        }
    };

    let start = Instant::now();
    let report = match compute_bounds(&setup, damping, rule) {
        Ok(r) => r,
        Err(e) => {
            row.reason = format!("bounds: {e}");
            return row;
        }
    };
    // the lower bound is closed-form; attribute the quadrature to the upper
    row.lb_seconds = 0.0;
    row.ub_seconds = start.elapsed().as_secs_f64();
    row.rho0 = report.rho0;
    row.gao_lb = Some(report.lower);
    row.gao_ub = Some(report.upper);
    if report.quad_tail_truncated {
        row.reason = format!(
            "quadrature tail truncated at eta_max (last panel {:.2e})",
            report.quad_last_panel_abs
        );
    }

    match mc_cfg {
        None => {
            if row.reason.is_empty() {
                row.reason = "mc skipped (n_sims = 0)".into();
            }
        }
        Some(cfg) => {
            let start = Instant::now();
            match mc_gao_price(&setup, cfg) {
                Ok(mc) => {
                    row.mc_seconds = start.elapsed().as_secs_f64();
                    row.mc_estimate = Some(mc.estimate);
                    row.mc_se = Some(mc.std_error);
                    if mc.estimate != 0.0 {
                        row.lb_rel_diff = Some((report.lower - mc.estimate).abs() / mc.estimate);
                        row.ub_rel_diff = Some((report.upper - mc.estimate).abs() / mc.estimate);
                    }
                    row.bracket_status =
                        Some(mc_bracket_check(report.lower, report.upper, &mc).status);
                }
                Err(e) => {
                    row.reason = format!("mc: {e}");
                }
            }
        }
    }
    row
}
