//! Parameter sweeps written as CSV, one row per point and outcome.

use rayon::prelude::*;

use qshi_core::protocol::BellLabel;
use qshi_core::state::ZERO_NORM;

use crate::config::RunConfig;
use crate::run::execute;
use crate::CliError;

pub const CSV_HEADER: &str = "param,value,outcome,probability,fidelity,concurrence,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    ZeroProbability,
    Degenerate,
    /// The swept value broke a load-time invariant such as unitarity.
    Invalid,
}

impl PointStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::ZeroProbability => "zero_probability",
            PointStatus::Degenerate => "degenerate",
            PointStatus::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: BellLabel,
    pub probability: Option<f64>,
    pub fidelity: Option<f64>,
    pub concurrence: Option<f64>,
    pub status: PointStatus,
}

fn point_rows(config: &RunConfig, value: f64, tol: f64) -> Vec<SweepRow> {
    let blank = |status| {
        BellLabel::ALL
            .iter()
            .map(|&outcome| SweepRow {
                value,
                outcome,
                probability: None,
                fidelity: None,
                concurrence: None,
                status,
            })
            .collect()
    };
    let report = match config.at_sweep_value(value).map_err(CliError::Validation) {
        Ok(point) => execute(&point, tol),
        Err(e) => Err(e),
    };
    match report {
        Ok(report) => report
            .outcomes
            .iter()
            .map(|o| SweepRow {
                value,
                outcome: o.label,
                probability: Some(o.probability),
                fidelity: o.fidelity,
                concurrence: Some(report.channel_concurrence),
                status: if o.probability < ZERO_NORM {
                    PointStatus::ZeroProbability
                } else {
                    PointStatus::Ok
                },
            })
            .collect(),
        Err(CliError::Degenerate { .. }) => blank(PointStatus::Degenerate),
        Err(_) => blank(PointStatus::Invalid),
    }
}

/// Evaluates every sweep point in parallel; rows come back in sweep order.
pub fn sweep_rows(config: &RunConfig, tol: f64) -> Result<Vec<SweepRow>, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Validation("config has no sweep section".into()))?;
    let points: Vec<Vec<SweepRow>> = sweep
        .values()
        .into_par_iter()
        .map(|v| point_rows(config, v, tol))
        .collect();
    Ok(points.into_iter().flatten().collect())
}

fn number(x: Option<f64>) -> String {
    x.map(|x| format!("{x:.14e}")).unwrap_or_default()
}

pub fn to_csv(param: &str, rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{param},{},{},{},{},{},{}\n",
            number(Some(row.value)),
            row.outcome.as_str(),
            number(row.probability),
            number(row.fidelity),
            number(row.concurrence),
            row.status.as_str()
        ));
    }
    out
}
