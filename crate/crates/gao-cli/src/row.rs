//! Result rows and CSV output.
//!
//! Numbers are written in the shortest decimal form that round-trips, so a
//! stored CSV compares bit-faithfully against regenerated output. Timings
//! are reported on stderr, never in the CSV, which keeps repeated runs
//! byte-identical.

use std::io::Write;

use gao_core::montecarlo::BracketStatus;

pub const CSV_HEADER: &str = "sweep_value,rho0,gao_lb,mc_estimate,mc_se,gao_ub,lb_rel_diff,ub_rel_diff,bracket_status,reason";

#[derive(Clone, Debug, Default)]
pub struct ResultRow {
    pub sweep_value: Option<f64>,
    pub rho0: Option<f64>,
    pub gao_lb: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_se: Option<f64>,
    pub gao_ub: Option<f64>,
    pub lb_rel_diff: Option<f64>,
    pub ub_rel_diff: Option<f64>,
    pub bracket_status: Option<BracketStatus>,
    /// Why any column is empty (or an error description for failed rows).
    pub reason: String,
    pub lb_seconds: f64,
    pub ub_seconds: f64,
    pub mc_seconds: f64,
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        let status = match self.bracket_status {
            Some(BracketStatus::Pass) => "PASS",
            Some(BracketStatus::Flag) => "FLAG",
            None => "",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_opt(self.sweep_value),
            fmt_opt(self.rho0),
            fmt_opt(self.gao_lb),
            fmt_opt(self.mc_estimate),
            fmt_opt(self.mc_se),
            fmt_opt(self.gao_ub),
            fmt_opt(self.lb_rel_diff),
            fmt_opt(self.ub_rel_diff),
            status,
            escape_csv(&self.reason),
        )
    }
}

fn escape_csv(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the header plus one line per row, UTF-8 with LF endings.
pub fn write_csv<W: Write>(mut out: W, rows: &[ResultRow]) -> std::io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.to_csv_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn print_timings(rows: &[ResultRow]) {
    for row in rows {
        eprintln!(
            "timing sweep={}: lb {:.3}s, ub {:.3}s, mc {:.3}s",
            fmt_opt(row.sweep_value),
            row.lb_seconds,
            row.ub_seconds,
            row.mc_seconds
        );
    }
}
