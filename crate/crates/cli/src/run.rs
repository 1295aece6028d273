//! Single protocol execution: JSON report plus a summary table.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;

use qshi_core::protocol::{
    self, congruence_residual, constraint_residual, feed_forward_constraints, sample_outcomes,
    BellLabel, ProtocolOptions, ProtocolReport,
};
use qshi_core::state::SpinState;
use qshi_core::Error;

use crate::config::{JunctionSpec, RingSpec, RunConfig, SweepSpec};
use crate::CliError;

/// Runs the protocol on a loaded config, pinning degeneracies on the ring
/// that caused them.
pub fn execute(config: &RunConfig, tol: f64) -> Result<ProtocolReport, CliError> {
    let rings = config.rings().map_err(CliError::Validation)?;
    let degenerate = |ring: &'static str| {
        move |e: Error| match e {
            Error::DegenerateState { .. } => CliError::Degenerate {
                ring,
                detail: e.to_string(),
            },
            other => CliError::Other(other.to_string()),
        }
    };
    rings.a.amplitudes().map_err(degenerate("ring_a"))?;
    rings.b.amplitudes().map_err(degenerate("ring_b"))?;
    let options = ProtocolOptions {
        mode: config.mode,
        tol,
    };
    // Anything degenerate past this point is the filtered qubit of ring A.
    protocol::run_protocol(&rings.a, &rings.b, config.qubit_choice, options)
        .map_err(degenerate("ring_a"))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn pairs(state: &SpinState) -> Vec<[f64; 2]> {
    state.amplitudes().iter().copied().map(pair).collect()
}

#[derive(Serialize)]
struct JunctionEcho {
    t: [f64; 2],
    p: [f64; 2],
    f: [f64; 2],
}

impl From<&JunctionSpec> for JunctionEcho {
    fn from(j: &JunctionSpec) -> Self {
        Self {
            t: pair(j.t),
            p: pair(j.p),
            f: pair(j.f),
        }
    }
}

#[derive(Serialize)]
struct RingEcho {
    junction_a: JunctionEcho,
    junction_b: JunctionEcho,
    lengths: [f64; 7],
    v_f: f64,
    alpha: f64,
    energy: f64,
    gate: f64,
}

impl From<&RingSpec> for RingEcho {
    fn from(r: &RingSpec) -> Self {
        Self {
            junction_a: (&r.junction_a).into(),
            junction_b: (&r.junction_b).into(),
            lengths: r.lengths,
            v_f: r.v_f,
            alpha: r.alpha,
            energy: r.energy,
            gate: r.gate,
        }
    }
}

#[derive(Serialize)]
struct SweepEcho<'a> {
    param: &'a str,
    start: f64,
    stop: f64,
    steps: usize,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    ring_a: RingEcho,
    ring_b: RingEcho,
    qubit_choice: &'static str,
    mode: &'static str,
    seed: u64,
    shots: u64,
    sweep: Option<SweepEcho<'a>>,
}

#[derive(Serialize)]
struct QubitJson {
    amplitudes: Vec<[f64; 2]>,
    /// Probability of the spin-resolved detection on mode 2A.
    d2a_probability: f64,
}

#[derive(Serialize)]
struct ChannelJson {
    amplitudes: Vec<[f64; 2]>,
    concurrence: f64,
}

#[derive(Serialize)]
struct OutcomeJson {
    label: &'static str,
    probability: f64,
    constraints_ok: bool,
    congruence_ok: bool,
    corrected: bool,
    bob_final: Option<Vec<[f64; 2]>>,
    fidelity: Option<f64>,
    sampled_count: Option<u64>,
}

#[derive(Serialize)]
struct ConstraintJson {
    outcome: &'static str,
    flip: String,
    tunnel: String,
    preserve: String,
    congruence: &'static str,
    junction_residual: f64,
    congruence_residual: f64,
}

#[derive(Serialize)]
struct RunReport<'a> {
    config_echo: ConfigEcho<'a>,
    mode: &'static str,
    qubit_choice: &'static str,
    qubit: QubitJson,
    channel: ChannelJson,
    outcomes: Vec<OutcomeJson>,
    table1_constraints: Vec<ConstraintJson>,
    seed: u64,
    shots: u64,
}

fn echo(config: &RunConfig) -> ConfigEcho<'_> {
    ConfigEcho {
        ring_a: (&config.ring_a).into(),
        ring_b: (&config.ring_b).into(),
        qubit_choice: config.qubit_choice.as_str(),
        mode: config.mode.as_str(),
        seed: config.seed,
        shots: config.shots,
        sweep: config.sweep.as_ref().map(|s: &SweepSpec| SweepEcho {
            param: &s.param,
            start: s.start,
            stop: s.stop,
            steps: s.steps,
        }),
    }
}

/// Monte Carlo outcome counts; `None` when `shots` is 0.
pub fn sampled_counts(config: &RunConfig, report: &ProtocolReport) -> Option<[u64; 4]> {
    (config.shots > 0).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        sample_outcomes(&report.probabilities(), config.shots, &mut rng)
    })
}

pub fn report_json(config: &RunConfig, report: &ProtocolReport) -> Result<String, CliError> {
    let rings = config.rings().map_err(CliError::Validation)?;
    let phases = rings.b.phases();
    let counts = sampled_counts(config, report);
    let outcomes = report
        .outcomes
        .iter()
        .map(|o| OutcomeJson {
            label: o.label.as_str(),
            probability: o.probability,
            constraints_ok: o.constraint_satisfied,
            congruence_ok: o.congruence_satisfied,
            corrected: o.corrected,
            bob_final: o.bob_final.as_ref().map(pairs),
            fidelity: o.fidelity,
            sampled_count: counts.map(|c| c[o.label.index()]),
        })
        .collect();
    let table1_constraints = BellLabel::ALL
        .iter()
        .map(|&label| {
            let row = feed_forward_constraints(label);
            ConstraintJson {
                outcome: label.as_str(),
                flip: row.flip_text(),
                tunnel: row.tunnel_text(),
                preserve: row.preserve_text(),
                congruence: row.congruence.as_str(),
                junction_residual: constraint_residual(&rings.b.junctions, label),
                congruence_residual: congruence_residual(&phases, row.congruence),
            }
        })
        .collect();
    let out = RunReport {
        config_echo: echo(config),
        mode: report.mode.as_str(),
        qubit_choice: config.qubit_choice.as_str(),
        qubit: QubitJson {
            amplitudes: pairs(&report.qubit),
            d2a_probability: report.qubit_probability,
        },
        channel: ChannelJson {
            amplitudes: pairs(&report.channel),
            concurrence: report.channel_concurrence,
        },
        outcomes,
        table1_constraints,
        seed: config.seed,
        shots: config.shots,
    };
    serde_json::to_string_pretty(&out)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Other(e.to_string()))
}

pub fn summary_table(report: &ProtocolReport, counts: Option<[u64; 4]>) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{:<8}{:<18}{:<16}{:<15}{:<16}",
        "outcome", "probability", "constraints_ok", "congruence_ok", "fidelity"
    );
    if counts.is_some() {
        out.push_str("count");
    }
    out = out.trim_end().to_string();
    out.push('\n');
    for o in &report.outcomes {
        let fidelity = o
            .fidelity
            .map(|f| format!("{f:.12}"))
            .unwrap_or_else(|| "-".into());
        let mut line = format!(
            "{:<8}{:<18}{:<16}{:<15}{:<16}",
            o.label.as_str(),
            format!("{:.12}", o.probability),
            o.constraint_satisfied,
            o.congruence_satisfied,
            fidelity
        );
        if let Some(c) = counts {
            line.push_str(&c[o.label.index()].to_string());
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
