//! Brute-force teleportation used to cross-check the protocol module.
//!
//! Everything here works on raw amplitude arrays: the Bell vectors, the
//! partial inner products and the Pauli corrections are spelled out
//! explicitly. Only [`SpinState`] and [`fidelity`] are shared with the rest
//! of the crate; the comparison helper at the bottom is the one place that
//! reads a [`ProtocolReport`].

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::protocol::ProtocolReport;
use crate::state::{fidelity, SpinState};

type Mat2 = [[Complex64; 2]; 2];

const ZERO_BRANCH: f64 = 1e-15;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Which Bell state the shared pair is (closest to). Outcomes are indexed
/// in the same order: `Φ+`, `Φ−`, `Ψ+`, `Ψ−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelFrame {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl ChannelFrame {
    const ALL: [ChannelFrame; 4] = [
        ChannelFrame::PhiPlus,
        ChannelFrame::PhiMinus,
        ChannelFrame::PsiPlus,
        ChannelFrame::PsiMinus,
    ];

    /// Bob-side Pauli `P` with `channel = (1 ⊗ P) Φ+`.
    fn bob_pauli(self) -> Mat2 {
        let (o, l) = (re(0.0), re(1.0));
        match self {
            ChannelFrame::PhiPlus => [[l, o], [o, l]],
            ChannelFrame::PhiMinus => [[l, o], [o, -l]],
            ChannelFrame::PsiPlus => [[o, l], [l, o]],
            ChannelFrame::PsiMinus => [[o, -l], [l, o]],
        }
    }
}

/// Bell vectors as `w[a][b]` coefficients over the two measured spins.
fn bell_coefficients() -> [[[f64; 2]; 2]; 4] {
    let h = FRAC_1_SQRT_2;
    [
        [[h, 0.0], [0.0, h]],
        [[h, 0.0], [0.0, -h]],
        [[0.0, h], [h, 0.0]],
        [[0.0, h], [-h, 0.0]],
    ]
}

/// Operator taking Bob's raw state for outcome `k` back to the qubit when
/// the channel is exactly `Φ+`.
fn phi_plus_inverse_rotation(k: usize) -> Mat2 {
    let (o, l) = (re(0.0), re(1.0));
    match k {
        0 => [[l, o], [o, l]],
        1 => [[l, o], [o, -l]],
        2 => [[o, l], [l, o]],
        _ => [[o, l], [-l, o]],
    }
}

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[re(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Inverse of a Pauli-type matrix (unitary): its conjugate transpose.
fn dagger(a: Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn apply(m: Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRecord {
    pub probability: f64,
    /// Bob's state after the Pauli correction; `None` for empty branches.
    pub corrected: Option<SpinState>,
}

/// Picks the Bell state with the largest overlap with `channel`, earliest
/// first on ties.
pub fn infer_frame(channel: &SpinState) -> Result<ChannelFrame> {
    if channel.len() != 4 {
        return Err(Error::Dimension(format!(
            "channel needs 4 amplitudes, got {}",
            channel.len()
        )));
    }
    let amps = channel.amplitudes();
    let mut best = (ChannelFrame::PhiPlus, -1.0);
    for (frame, w) in ChannelFrame::ALL.iter().zip(bell_coefficients()) {
        let overlap =
            (w[0][0] * amps[0] + w[0][1] * amps[1] + w[1][0] * amps[2] + w[1][1] * amps[3])
                .norm_sqr();
        if overlap > best.1 + 1e-12 {
            best = (*frame, overlap);
        }
    }
    Ok(best.0)
}

/// Textbook teleportation with the correction table chosen from the
/// channel's closest Bell state.
pub fn textbook_teleport(qubit: &SpinState, channel: &SpinState) -> Result<[OracleRecord; 4]> {
    textbook_teleport_in_frame(qubit, channel, infer_frame(channel)?)
}

/// Textbook teleportation assuming the channel is the Bell state `frame`,
/// whatever it actually is.
pub fn textbook_teleport_in_frame(
    qubit: &SpinState,
    channel: &SpinState,
    frame: ChannelFrame,
) -> Result<[OracleRecord; 4]> {
    if qubit.len() != 2 || channel.len() != 4 {
        return Err(Error::Dimension(format!(
            "oracle needs a qubit and a two-spin channel, got {} and {} amplitudes",
            qubit.len(),
            channel.len()
        )));
    }
    for s in [qubit, channel] {
        if (s.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized {
                norm_sqr: s.norm_sqr(),
            });
        }
    }
    let q = qubit.amplitudes();
    let ch = channel.amplitudes();

    // x[4a + 2b + c] with a = 1A, b = 1B, c = 2B.
    let mut x = [re(0.0); 8];
    for a in 0..2 {
        for bc in 0..4 {
            x[4 * a + bc] = q[a] * ch[bc];
        }
    }

    let frame_undo = dagger(frame.bob_pauli());
    let mut records = Vec::with_capacity(4);
    for (k, w) in bell_coefficients().iter().enumerate() {
        let mut bob = [re(0.0); 2];
        for (c, slot) in bob.iter_mut().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    *slot += w[a][b] * x[4 * a + 2 * b + c];
                }
            }
        }
        let probability = bob[0].norm_sqr() + bob[1].norm_sqr();
        let corrected = if probability < ZERO_BRANCH {
            None
        } else {
            let fixed = apply(mat_mul(phi_plus_inverse_rotation(k), frame_undo), bob);
            let n = probability.sqrt();
            Some(SpinState::qubit(fixed[0] / n, fixed[1] / n))
        };
        records.push(OracleRecord {
            probability,
            corrected,
        });
    }
    Ok(records.try_into().expect("four records"))
}

/// Agreement between a protocol run and the oracle on the same inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunComparison {
    pub max_probability_diff: f64,
    /// Smallest fidelity between the two corrected states over the compared
    /// branches; 1 when no branch was compared.
    pub min_state_fidelity: f64,
    pub compared_states: usize,
}

impl RunComparison {
    pub fn within(&self, tol: f64) -> bool {
        self.max_probability_diff <= tol && (1.0 - self.min_state_fidelity).abs() <= tol
    }
}

/// Compares branch probabilities everywhere and Bob's states on every
/// non-empty branch that the protocol reports as corrected.
pub fn compare_runs_detail(report: &ProtocolReport, oracle: &[OracleRecord; 4]) -> RunComparison {
    let mut out = RunComparison {
        max_probability_diff: 0.0,
        min_state_fidelity: 1.0,
        compared_states: 0,
    };
    for (record, reference) in report.outcomes.iter().zip(oracle) {
        out.max_probability_diff = out
            .max_probability_diff
            .max((record.probability - reference.probability).abs());
        if !record.corrected {
            continue;
        }
        let (Some(bob), Some(expected)) = (&record.bob_final, &reference.corrected) else {
            if record.probability >= ZERO_BRANCH || reference.probability >= ZERO_BRANCH {
                out.min_state_fidelity = 0.0;
            }
            continue;
        };
        let f = fidelity(bob, expected).unwrap_or(0.0);
        out.min_state_fidelity = out.min_state_fidelity.min(f);
        out.compared_states += 1;
    }
    out
}

pub fn compare_runs(report: &ProtocolReport, oracle: &[OracleRecord; 4], tol: f64) -> bool {
    compare_runs_detail(report, oracle).within(tol)
}
