//! End-to-end teleportation from ring A to ring B.
//!
//! Ring A supplies the qubit on mode 1A after a spin-resolved detection of
//! mode 2A. Ring B supplies the channel: mode 1B goes to Alice, mode 2B
//! stays with Bob. The joint detector projects (1A, 1B) onto the Bell
//! basis, and Bob's feed-forward is either the junction-setting table
//! (constraint mode) or the standard Pauli correction (unitary mode).

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{JunctionPair, PhaseSet, RingAmplitudes, RingConfig};
use crate::state::{self, SpinState, EXACT_TOL, ZERO_NORM};

/// Default tolerance for feed-forward constraint and congruence checks.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Spin selected by the detector on mode 2A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitChoice {
    Up,
    Down,
}

impl QubitChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            QubitChoice::Up => "up",
            QubitChoice::Down => "down",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "Phi+",
            BellLabel::PhiMinus => "Phi-",
            BellLabel::PsiPlus => "Psi+",
            BellLabel::PsiMinus => "Psi-",
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn sign(&self) -> Sign {
        match self {
            BellLabel::PhiPlus | BellLabel::PsiPlus => Sign::Plus,
            BellLabel::PhiMinus | BellLabel::PsiMinus => Sign::Minus,
        }
    }

    pub fn is_phi(&self) -> bool {
        matches!(self, BellLabel::PhiPlus | BellLabel::PhiMinus)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four Bell states in [`BellLabel::ALL`] order.
pub fn bell_basis() -> [SpinState; 4] {
    BellLabel::ALL.map(bell_state)
}

pub fn bell_state(label: BellLabel) -> SpinState {
    let h = FRAC_1_SQRT_2;
    let amps = match label {
        BellLabel::PhiPlus => [h, 0.0, 0.0, h],
        BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
        BellLabel::PsiPlus => [0.0, h, h, 0.0],
        BellLabel::PsiMinus => [0.0, h, -h, 0.0],
    };
    SpinState::from_real(&amps).expect("four amplitudes")
}

/// Qubit left on mode 1A and the probability of the mode-2A detection that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedQubit {
    pub state: SpinState,
    pub probability: f64,
}

pub fn generate_qubit(ring_a: &RingAmplitudes, choice: QubitChoice) -> Result<GeneratedQubit> {
    let norm_sqr = ring_a.norm_sqr();
    if (norm_sqr - 1.0).abs() > EXACT_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let raw = match choice {
        QubitChoice::Up => SpinState::qubit(ring_a.up_up, ring_a.down_up),
        QubitChoice::Down => SpinState::qubit(ring_a.up_down, ring_a.down_down),
    };
    Ok(GeneratedQubit {
        probability: raw.norm_sqr(),
        state: raw.normalized()?,
    })
}

/// `qubit ⊗ channel`, ordered (1A, 1B, 2B).
pub fn total_state(qubit: &SpinState, channel: &SpinState) -> Result<SpinState> {
    if qubit.len() != 2 || channel.len() != 4 {
        return Err(Error::Dimension(format!(
            "expected a 2-amplitude qubit and a 4-amplitude channel, got {} and {}",
            qubit.len(),
            channel.len()
        )));
    }
    for s in [qubit, channel] {
        if !s.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sqr: s.norm_sqr(),
            });
        }
    }
    state::tensor(qubit, channel)
}

/// One branch of the joint measurement on (1A, 1B).
#[derive(Debug, Clone, PartialEq)]
pub struct BellOutcome {
    pub label: BellLabel,
    pub probability: f64,
    /// Unnormalized state left on mode 2B.
    pub bob_state_raw: SpinState,
}

impl BellOutcome {
    pub fn is_zero(&self) -> bool {
        self.probability < ZERO_NORM
    }
}

pub fn bell_measure(total: &SpinState) -> Result<[BellOutcome; 4]> {
    if total.len() != 8 {
        return Err(Error::Dimension(format!(
            "joint measurement needs 8 amplitudes, got {}",
            total.len()
        )));
    }
    if !total.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: total.norm_sqr(),
        });
    }
    let mut outcomes = Vec::with_capacity(4);
    for label in BellLabel::ALL {
        let projection = state::project(total, &bell_state(label), &[0, 1])?;
        outcomes.push(BellOutcome {
            label,
            probability: projection.probability,
            bob_state_raw: projection.residual,
        });
    }
    Ok(outcomes.try_into().expect("four outcomes"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(&self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Rule for the spin-flip amplitudes of ring B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipRule {
    /// `f_b = ± f_a*`
    Conjugate(Sign),
    /// `f_a = f_b = 0`
    Zero,
}

/// Rule for the tunneling amplitudes; the same for every outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TunnelRule {
    /// `t_a = t_b*`
    Conjugate,
}

/// Rule for the preserving amplitudes of ring B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreserveRule {
    /// `p_a = p_b = 0`
    Zero,
    /// `p_b = ± p_a*`
    Conjugate(Sign),
}

/// Phase condition on ring B's geometry that must accompany a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Congruence {
    /// `φ12 + φ456 ≡ φ34 + φ167 (mod 2π)`
    Cg1,
    /// `φ15 + φ34 ≡ φ12 + φ47 (mod 2π)`
    Cg2,
}

impl Congruence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Congruence::Cg1 => "CG1",
            Congruence::Cg2 => "CG2",
        }
    }
}

/// One row of Bob's junction-setting table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeedForwardConstraints {
    pub flip: FlipRule,
    pub tunnel: TunnelRule,
    pub preserve: PreserveRule,
    pub congruence: Congruence,
}

impl FeedForwardConstraints {
    pub fn flip_text(&self) -> String {
        match self.flip {
            FlipRule::Conjugate(s) => format!("f_bB = {}f_aB*", s.symbol()),
            FlipRule::Zero => "f_aB = f_bB = 0".into(),
        }
    }

    pub fn tunnel_text(&self) -> String {
        match self.tunnel {
            TunnelRule::Conjugate => "t_aB = t_bB*".into(),
        }
    }

    pub fn preserve_text(&self) -> String {
        match self.preserve {
            PreserveRule::Zero => "p_aB = p_bB = 0".into(),
            PreserveRule::Conjugate(s) => format!("p_bB = {}p_aB*", s.symbol()),
        }
    }
}

pub fn feed_forward_constraints(label: BellLabel) -> FeedForwardConstraints {
    let sign = label.sign();
    if label.is_phi() {
        FeedForwardConstraints {
            flip: FlipRule::Conjugate(sign),
            tunnel: TunnelRule::Conjugate,
            preserve: PreserveRule::Zero,
            congruence: Congruence::Cg1,
        }
    } else {
        FeedForwardConstraints {
            flip: FlipRule::Zero,
            tunnel: TunnelRule::Conjugate,
            preserve: PreserveRule::Conjugate(sign),
            congruence: Congruence::Cg2,
        }
    }
}

/// Largest amplitude mismatch between ring B's junctions and the row for
/// `label`.
pub fn constraint_residual(junctions: &JunctionPair, label: BellLabel) -> f64 {
    let JunctionPair { a, b } = junctions;
    let row = feed_forward_constraints(label);
    let mut residual = (a.t - b.t.conj()).norm();
    residual = residual.max(match row.flip {
        FlipRule::Conjugate(s) => (b.f - a.f.conj() * s.factor()).norm(),
        FlipRule::Zero => a.f.norm().max(b.f.norm()),
    });
    residual.max(match row.preserve {
        PreserveRule::Zero => a.p.norm().max(b.p.norm()),
        PreserveRule::Conjugate(s) => (b.p - a.p.conj() * s.factor()).norm(),
    })
}

pub fn check_constraints(junctions: &JunctionPair, label: BellLabel, tol: f64) -> bool {
    constraint_residual(junctions, label) <= tol
}

/// Distance of `x` from the nearest multiple of 2π.
fn wrapped_distance(x: f64) -> f64 {
    (x - TAU * (x / TAU).round()).abs().min(PI)
}

pub fn congruence_residual(phases: &PhaseSet, which: Congruence) -> f64 {
    let diff = match which {
        Congruence::Cg1 => (phases.phi_12 + phases.phi_456) - (phases.phi_34 + phases.phi_167),
        Congruence::Cg2 => (phases.phi_15 + phases.phi_34) - (phases.phi_12 + phases.phi_47),
    };
    wrapped_distance(diff)
}

pub fn check_congruence(phases: &PhaseSet, which: Congruence, tol: f64) -> bool {
    congruence_residual(phases, which) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionMode {
    /// Bob's junctions must already satisfy the outcome's table row; his
    /// state is only renormalized.
    Constraint,
    /// Bob applies the Pauli correction for an ideal `Φ+` channel.
    Unitary,
}

impl CorrectionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorrectionMode::Constraint => "constraint",
            CorrectionMode::Unitary => "unitary",
        }
    }
}

/// Pauli correction for `label`, assuming a `Φ+` channel.
pub fn unitary_correction(label: BellLabel) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    match label {
        BellLabel::PhiPlus => [[l, o], [o, l]],
        BellLabel::PhiMinus => [[l, o], [o, -l]],
        BellLabel::PsiPlus => [[o, l], [l, o]],
        // swap, then diag(1, -1)
        BellLabel::PsiMinus => [[o, l], [-l, o]],
    }
}

/// Bob's qubit after the feed-forward step.
pub fn bob_final_state(
    outcome: &BellOutcome,
    ring_b: &JunctionPair,
    phases: &PhaseSet,
    mode: CorrectionMode,
    tol: f64,
) -> Result<SpinState> {
    if outcome.is_zero() {
        return Err(Error::ZeroProbability(outcome.label.to_string()));
    }
    match mode {
        CorrectionMode::Constraint => {
            let row = feed_forward_constraints(outcome.label);
            let residual = constraint_residual(ring_b, outcome.label);
            if residual > tol {
                return Err(Error::ConstraintViolation {
                    outcome: outcome.label.to_string(),
                    reason: format!("junction residual {residual:.3e} exceeds {tol:.3e}"),
                });
            }
            let residual = congruence_residual(phases, row.congruence);
            if residual > tol {
                return Err(Error::ConstraintViolation {
                    outcome: outcome.label.to_string(),
                    reason: format!(
                        "{} phase mismatch {residual:.3e} exceeds {tol:.3e}",
                        row.congruence.as_str()
                    ),
                });
            }
            outcome.bob_state_raw.normalized()
        }
        CorrectionMode::Unitary => outcome
            .bob_state_raw
            .normalized()?
            .apply_2x2(unitary_correction(outcome.label)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOptions {
    pub mode: CorrectionMode,
    pub tol: f64,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self {
            mode: CorrectionMode::Constraint,
            tol: CONSTRAINT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub label: BellLabel,
    pub probability: f64,
    pub constraint_satisfied: bool,
    pub congruence_satisfied: bool,
    /// Whether `bob_final` is a feed-forward reconstruction: always in
    /// unitary mode, only when the row and congruence hold in constraint
    /// mode.
    pub corrected: bool,
    /// `None` for branches below the probability floor.
    pub bob_final: Option<SpinState>,
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub mode: CorrectionMode,
    pub choice: Option<QubitChoice>,
    pub qubit: SpinState,
    /// Probability of the mode-2A detection; 1 when the qubit was supplied.
    pub qubit_probability: f64,
    pub channel: SpinState,
    pub channel_concurrence: f64,
    pub outcomes: [OutcomeRecord; 4],
}

impl ProtocolReport {
    pub fn probability_sum(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn outcome(&self, label: BellLabel) -> &OutcomeRecord {
        &self.outcomes[label.index()]
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.outcomes.each_ref().map(|o| o.probability)
    }
}

/// Full protocol: qubit from ring A, channel from ring B.
pub fn run_protocol(
    ring_a: &RingConfig,
    ring_b: &RingConfig,
    choice: QubitChoice,
    options: ProtocolOptions,
) -> Result<ProtocolReport> {
    let qubit = generate_qubit(&ring_a.amplitudes()?, choice)?;
    let mut report = teleport_qubit(&qubit.state, ring_b, options)?;
    report.choice = Some(choice);
    report.qubit_probability = qubit.probability;
    Ok(report)
}

/// Teleports an explicitly supplied qubit through ring B's channel.
pub fn teleport_qubit(
    qubit: &SpinState,
    ring_b: &RingConfig,
    options: ProtocolOptions,
) -> Result<ProtocolReport> {
    let channel = ring_b.amplitudes()?.to_state();
    let phases = ring_b.phases();
    let total = total_state(qubit, &channel)?;
    let outcomes = bell_measure(&total)?;

    let records = outcomes.map(|outcome| {
        let row = feed_forward_constraints(outcome.label);
        let constraint_satisfied = check_constraints(&ring_b.junctions, outcome.label, options.tol);
        let congruence_satisfied = check_congruence(&phases, row.congruence, options.tol);
        let bob_final = if outcome.is_zero() {
            None
        } else {
            let normalized = outcome.bob_state_raw.normalized().ok();
            match options.mode {
                CorrectionMode::Constraint => normalized,
                CorrectionMode::Unitary => {
                    normalized.and_then(|s| s.apply_2x2(unitary_correction(outcome.label)).ok())
                }
            }
        };
        let fidelity = bob_final
            .as_ref()
            .and_then(|b| state::fidelity(b, qubit).ok());
        OutcomeRecord {
            label: outcome.label,
            probability: outcome.probability,
            constraint_satisfied,
            congruence_satisfied,
            corrected: match options.mode {
                CorrectionMode::Constraint => constraint_satisfied && congruence_satisfied,
                CorrectionMode::Unitary => true,
            },
            bob_final,
            fidelity,
        }
    });

    Ok(ProtocolReport {
        mode: options.mode,
        choice: None,
        qubit: qubit.clone(),
        qubit_probability: 1.0,
        channel_concurrence: state::concurrence(&channel)?,
        channel,
        outcomes: records,
    })
}

/// Draws `shots` measurement outcomes from the exact branch probabilities.
pub fn sample_outcomes<R: Rng + ?Sized>(
    probabilities: &[f64; 4],
    shots: u64,
    rng: &mut R,
) -> [u64; 4] {
    let mut counts = [0u64; 4];
    let Ok(dist) = WeightedIndex::new(probabilities.map(|p| p.max(0.0))) else {
        return counts;
    };
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    counts
}

/// Spin of one mode in the coincidence frame of the joint detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoincidenceSpin {
    Up,
    Down,
}

/// Coincidence-frame label `(mode 1A, mode 1B)` of a Bell state.
pub fn coincidence_label(label: BellLabel) -> (CoincidenceSpin, CoincidenceSpin) {
    use CoincidenceSpin::{Down, Up};
    match label {
        BellLabel::PhiPlus => (Up, Up),
        BellLabel::PhiMinus => (Down, Down),
        BellLabel::PsiPlus => (Up, Down),
        BellLabel::PsiMinus => (Down, Up),
    }
}

pub fn bell_label_from_coincidence(a: CoincidenceSpin, b: CoincidenceSpin) -> BellLabel {
    use CoincidenceSpin::{Down, Up};
    match (a, b) {
        (Up, Up) => BellLabel::PhiPlus,
        (Down, Down) => BellLabel::PhiMinus,
        (Up, Down) => BellLabel::PsiPlus,
        (Down, Up) => BellLabel::PsiMinus,
    }
}

/// Computational-basis expansion of a coincidence-frame state.
pub fn coincidence_frame(a: CoincidenceSpin, b: CoincidenceSpin) -> SpinState {
    let h = FRAC_1_SQRT_2;
    let [uu, ud, du, dd] = match bell_label_from_coincidence(a, b) {
        BellLabel::PhiPlus => [1.0, 0.0, 0.0, 1.0],
        BellLabel::PhiMinus => [1.0, 0.0, 0.0, -1.0],
        BellLabel::PsiPlus => [0.0, 1.0, 1.0, 0.0],
        BellLabel::PsiMinus => [0.0, 1.0, -1.0, 0.0],
    };
    SpinState::from_real(&[uu * h, ud * h, du * h, dd * h]).expect("four amplitudes")
}
