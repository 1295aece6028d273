//! Invariant suites run on seeded random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qshi_core::oracle::{compare_runs_detail, textbook_teleport};
use qshi_core::protocol::{
    teleport_qubit, total_state, BellLabel, CorrectionMode, ProtocolOptions, CONSTRAINT_TOL,
};
use qshi_core::ring::{
    geometric_phases, phase_identity_residual, reduced_scattering_matrix,
    two_particle_amplitudes_pathlength_form, two_particle_amplitudes_phase_form,
    JunctionAmplitudes, JunctionPair, RingConfig, RingGeometry, RingPhysics,
};
use qshi_core::sampling::{
    random_circular_geometry, random_geometry, random_junction_pair, random_qubit,
    random_row_junctions,
};
use qshi_core::state::reduced_density;

pub const DEFAULT_SEED: u64 = 42;
pub const SAMPLES: usize = 500;
pub const SUITE_TOL: f64 = 1e-12;

const K_RANGE: f64 = 0.1;
const MIN_LENGTH: f64 = 10.0;
const MAX_LENGTH: f64 = 500.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tol: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tol
    }
}

fn physics_with_momentum(k: f64) -> RingPhysics {
    RingPhysics {
        fermi_velocity: 1.0,
        rashba: 0.0,
        energy: k,
        gate: 0.0,
    }
}

fn random_k(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-K_RANGE..K_RANGE)
}

fn unitarity(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let pair = random_junction_pair(rng);
        let phases = geometric_phases(random_k(rng), &random_geometry(rng, MIN_LENGTH, MAX_LENGTH));
        let Ok(s) = reduced_scattering_matrix(&pair, &phases) else {
            return f64::INFINITY;
        };
        for col in 0..2 {
            worst = worst.max((s.column_norm_sqr(col) - 1.0).abs());
        }
    }
    worst
}

fn phase_identities(rng: &mut ChaCha8Rng) -> f64 {
    (0..SAMPLES)
        .map(|_| {
            let k = random_k(rng);
            phase_identity_residual(k, &random_geometry(rng, MIN_LENGTH, MAX_LENGTH))
        })
        .fold(0.0, f64::max)
}

fn formulation_equivalence(rng: &mut ChaCha8Rng) -> f64 {
    (0..SAMPLES)
        .map(|_| {
            let pair = random_junction_pair(rng);
            let k = random_k(rng);
            let geom = random_geometry(rng, MIN_LENGTH, MAX_LENGTH);
            let phase = two_particle_amplitudes_phase_form(&pair, &geometric_phases(k, &geom));
            let path = two_particle_amplitudes_pathlength_form(&pair, k, &geom);
            phase.max_abs_diff(&path)
        })
        .fold(0.0, f64::max)
}

/// Each Bell-row channel in constraint mode, plus the ideal `Φ+` channel
/// in unitary mode, against the brute-force oracle.
fn oracle_comparison(rng: &mut ChaCha8Rng) -> f64 {
    let splitter = JunctionAmplitudes::beam_splitter();
    let ideal = RingConfig::new(
        JunctionPair::new(splitter, splitter),
        RingGeometry::default(),
        RingPhysics::default(),
    );
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let qubit = random_qubit(rng);
        let label = BellLabel::ALL[i % 4];
        let ring_b = RingConfig::new(
            random_row_junctions(rng, label),
            random_circular_geometry(rng, MIN_LENGTH, MAX_LENGTH),
            physics_with_momentum(random_k(rng)),
        );
        for (ring, mode) in [
            (ring_b, CorrectionMode::Constraint),
            (ideal, CorrectionMode::Unitary),
        ] {
            let options = ProtocolOptions {
                mode,
                tol: CONSTRAINT_TOL,
            };
            let Ok(report) = teleport_qubit(&qubit, &ring, options) else {
                return f64::INFINITY;
            };
            let Ok(oracle) = textbook_teleport(&qubit, &report.channel) else {
                return f64::INFINITY;
            };
            let cmp = compare_runs_detail(&report, &oracle);
            // The row channel must reconstruct its own outcome.
            if mode == CorrectionMode::Constraint && !report.outcome(label).corrected {
                return f64::INFINITY;
            }
            worst = worst
                .max(cmp.max_probability_diff)
                .max((1.0 - cmp.min_state_fidelity).abs());
        }
    }
    worst
}

fn no_signaling(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let ring = RingConfig::new(
            random_junction_pair(rng),
            random_geometry(rng, MIN_LENGTH, MAX_LENGTH),
            physics_with_momentum(random_k(rng)),
        );
        let Ok(amps) = ring.amplitudes() else {
            continue;
        };
        let channel = amps.to_state();
        let bob = |q| total_state(&q, &channel).and_then(|t| reduced_density(&t, &[2]));
        let (Ok(first), Ok(second)) = (bob(random_qubit(rng)), bob(random_qubit(rng))) else {
            return f64::INFINITY;
        };
        match first.trace_distance(&second) {
            Ok(d) => worst = worst.max(d),
            Err(_) => return f64::INFINITY,
        }
    }
    worst
}

type Suite = fn(&mut ChaCha8Rng) -> f64;

const SUITES: [(&str, Suite); 5] = [
    ("unitarity", unitarity),
    ("phase_identities", phase_identities),
    ("formulation_equivalence", formulation_equivalence),
    ("oracle_comparison", oracle_comparison),
    ("no_signaling", no_signaling),
];

/// Runs every suite; `tol` replaces the built-in tolerance.
pub fn run_suites(seed: u64, tol: Option<f64>) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            SuiteResult {
                name,
                max_deviation: suite(&mut rng),
                tol: tol.unwrap_or(SUITE_TOL),
            }
        })
        .collect()
}

pub fn format_results(seed: u64, results: &[SuiteResult]) -> String {
    let mut out = format!("selfcheck seed={seed} samples={SAMPLES}\n");
    for r in results {
        out.push_str(&format!(
            "{} {:<24} max_deviation={:.3e} tol={:.1e}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.max_deviation,
            r.tol
        ));
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!(
        "{} of {} suites passed\n",
        results.len() - failed,
        results.len()
    ));
    out
}
