//! Single-ring model: junction amplitudes, edge geometry and momentum,
//! the reduced scattering matrix, and the two-particle output state.
//!
//! Lengths are in nanometers and the edge momentum in radians per
//! nanometer, so every accumulated phase is in radians.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::state::{SpinState, EXACT_TOL, ZERO_NORM};

/// Admissible deviation of `|t|² + |p|² + |f|²` from one.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Default inner and outer radii of a ring, in nanometers.
pub const DEFAULT_INNER_RADIUS: f64 = 130.0;
pub const DEFAULT_OUTER_RADIUS: f64 = 230.0;

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, -phase)
}

/// Amplitudes of one tunneling junction: `t` tunnels to the opposite edge
/// with spin preserved, `p` stays on the same edge, `f` tunnels with a spin
/// flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionAmplitudes {
    pub t: Complex64,
    pub p: Complex64,
    pub f: Complex64,
}

impl JunctionAmplitudes {
    /// Builds a junction, rejecting triples whose total probability is off
    /// by more than [`UNITARITY_TOL`].
    pub fn new(t: Complex64, p: Complex64, f: Complex64) -> Result<Self> {
        let j = Self { t, p, f };
        j.check_unitarity(UNITARITY_TOL)?;
        Ok(j)
    }

    pub fn probability_sum(&self) -> f64 {
        self.t.norm_sqr() + self.p.norm_sqr() + self.f.norm_sqr()
    }

    pub fn check_unitarity(&self, tol: f64) -> Result<()> {
        let sum = self.probability_sum();
        if (sum - 1.0).abs() <= tol && sum.is_finite() {
            Ok(())
        } else {
            Err(Error::Unitarity { sum })
        }
    }

    /// `t = f = 1/√2`, `p = 0`.
    pub fn beam_splitter() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            t: Complex64::new(h, 0.0),
            p: Complex64::new(0.0, 0.0),
            f: Complex64::new(h, 0.0),
        }
    }
}

/// The two junctions `a` and `b` of one ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionPair {
    pub a: JunctionAmplitudes,
    pub b: JunctionAmplitudes,
}

impl JunctionPair {
    pub fn new(a: JunctionAmplitudes, b: JunctionAmplitudes) -> Self {
        Self { a, b }
    }

    pub fn check_unitarity(&self, tol: f64) -> Result<()> {
        self.a.check_unitarity(tol)?;
        self.b.check_unitarity(tol)
    }
}

/// Edge lengths `l1..l7`: `l1..l4` run along the outer edge, `l5..l7` along
/// the inner edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingGeometry {
    lengths: [f64; 7],
}

impl RingGeometry {
    pub fn new(lengths: [f64; 7]) -> Result<Self> {
        for (i, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Geometry(format!(
                    "l{} = {l} must be positive and finite",
                    i + 1
                )));
            }
        }
        Ok(Self { lengths })
    }

    /// Circular ring with the source/detector arcs `l1`, `l4` each an eighth
    /// of the outer circumference, the two remaining outer arcs equal, and
    /// the inner circumference split in thirds. Satisfies `l2 = l3` and
    /// `l5 = l7`.
    pub fn circular(inner_radius: f64, outer_radius: f64) -> Result<Self> {
        let outer = 2.0 * PI * outer_radius;
        let inner = 2.0 * PI * inner_radius;
        Self::new([
            outer / 8.0,
            3.0 * outer / 8.0,
            3.0 * outer / 8.0,
            outer / 8.0,
            inner / 3.0,
            inner / 3.0,
            inner / 3.0,
        ])
    }

    /// Length `l_index`, 1-based as in the ring drawings.
    pub fn l(&self, index: usize) -> f64 {
        self.lengths[index - 1]
    }

    pub fn lengths(&self) -> [f64; 7] {
        self.lengths
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.lengths.map(|l| l * factor))
    }

    pub fn is_circular_symmetric(&self) -> bool {
        self.l(2) == self.l(3) && self.l(5) == self.l(7)
    }
}

impl Default for RingGeometry {
    fn default() -> Self {
        Self::circular(DEFAULT_INNER_RADIUS, DEFAULT_OUTER_RADIUS)
            .expect("default radii are positive")
    }
}

/// Edge Hamiltonian parameters of one ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPhysics {
    pub fermi_velocity: f64,
    pub rashba: f64,
    pub energy: f64,
    pub gate: f64,
}

impl RingPhysics {
    pub fn new(fermi_velocity: f64, rashba: f64, energy: f64, gate: f64) -> Result<Self> {
        let physics = Self {
            fermi_velocity,
            rashba,
            energy,
            gate,
        };
        physics.validate()?;
        Ok(physics)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fermi_velocity.is_finite() && self.fermi_velocity > 0.0) {
            return Err(Error::Physics(format!(
                "Fermi velocity {} must be positive",
                self.fermi_velocity
            )));
        }
        if ![self.rashba, self.energy, self.gate]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(Error::Physics(
                "non-finite Rashba, energy or gate term".into(),
            ));
        }
        Ok(())
    }
}

impl Default for RingPhysics {
    fn default() -> Self {
        Self {
            fermi_velocity: 1.0,
            rashba: 0.0,
            energy: 0.05,
            gate: 0.0,
        }
    }
}

/// Fermi velocity with the Rashba term absorbed: `√(v_F² + α²)`.
pub fn modified_fermi_velocity(physics: &RingPhysics) -> f64 {
    physics.fermi_velocity.hypot(physics.rashba)
}

/// Edge momentum `K = (E + eV_g) / v_α`.
pub fn edge_momentum(physics: &RingPhysics) -> f64 {
    (physics.energy + physics.gate) / modified_fermi_velocity(physics)
}

/// Geometric phases accumulated along the length combinations that enter
/// the scattering matrix. `phi_136` is `K (l1 + l3 + l6)` and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub phi_12: f64,
    pub phi_15: f64,
    pub phi_34: f64,
    pub phi_47: f64,
    pub phi_136: f64,
    pub phi_146: f64,
    pub phi_167: f64,
    pub phi_246: f64,
    pub phi_456: f64,
}

impl PhaseSet {
    pub fn zero() -> Self {
        geometric_phases(0.0, &RingGeometry::default())
    }
}

pub fn geometric_phases(momentum: f64, geom: &RingGeometry) -> PhaseSet {
    let l = |i| geom.l(i);
    PhaseSet {
        phi_12: momentum * (l(1) + l(2)),
        phi_15: momentum * (l(1) + l(5)),
        phi_34: momentum * (l(3) + l(4)),
        phi_47: momentum * (l(4) + l(7)),
        phi_136: momentum * (l(1) + l(3) + l(6)),
        phi_146: momentum * (l(1) + l(4) + l(6)),
        phi_167: momentum * (l(1) + l(6) + l(7)),
        phi_246: momentum * (l(2) + l(4) + l(6)),
        phi_456: momentum * (l(4) + l(5) + l(6)),
    }
}

/// Path lengths of the four two-particle spin configurations, excluding the
/// `l6` detours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePathLengths {
    pub up_up: f64,
    pub up_down: f64,
    pub down_up: f64,
    pub down_down: f64,
}

pub fn effective_path_lengths(geom: &RingGeometry) -> EffectivePathLengths {
    let l = |i| geom.l(i);
    EffectivePathLengths {
        up_up: l(1) + l(2) + l(4) + l(5),
        up_down: l(1) + l(2) + l(4) + l(7),
        down_up: l(1) + l(3) + l(4) + l(5),
        down_down: l(1) + l(3) + l(4) + l(7),
    }
}

/// Checks that the path-length phases and the scattering-matrix phases
/// describe the same accumulated phase for every amplitude term.
pub fn verify_phase_identities(momentum: f64, geom: &RingGeometry) -> bool {
    phase_identity_residual(momentum, geom) <= EXACT_TOL
}

/// Largest violation among the six path-length/phase identities.
pub fn phase_identity_residual(momentum: f64, geom: &RingGeometry) -> f64 {
    let k = momentum;
    let phi = geometric_phases(k, geom);
    let paths = effective_path_lengths(geom);
    let l6 = geom.l(6);
    [
        k * paths.up_down - (phi.phi_12 + phi.phi_47),
        k * paths.down_up - (phi.phi_15 + phi.phi_34),
        k * paths.up_up + k * l6 - (phi.phi_12 + phi.phi_456),
        k * paths.up_down + 2.0 * k * l6 - (phi.phi_167 + phi.phi_246),
        k * paths.down_up + 2.0 * k * l6 - (phi.phi_136 + phi.phi_456),
        k * paths.down_down + k * l6 - (phi.phi_34 + phi.phi_167),
    ]
    .iter()
    .fold(0.0, |m, d| m.max(d.abs()))
}

/// Reduced scattering matrix from the source to the detectors.
///
/// Rows: `D1↑`, `D1↓`, `D2↑`, `D2↓`, then the two rows of the double
/// spin-flip path. Columns: source spin `↑`, `↓`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSMatrix {
    pub rows: [[Complex64; 2]; 6],
}

impl ReducedSMatrix {
    pub const D1_UP: usize = 0;
    pub const D1_DOWN: usize = 1;
    pub const D2_UP: usize = 2;
    pub const D2_DOWN: usize = 3;
    pub const FLIP_UP: usize = 4;
    pub const FLIP_DOWN: usize = 5;

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.rows[row][col]
    }

    pub fn column_norm_sqr(&self, col: usize) -> f64 {
        self.rows.iter().map(|r| r[col].norm_sqr()).sum()
    }
}

pub fn reduced_scattering_matrix(
    junctions: &JunctionPair,
    phases: &PhaseSet,
) -> Result<ReducedSMatrix> {
    junctions.check_unitarity(UNITARITY_TOL)?;
    let JunctionPair { a, b } = junctions;
    let zero = Complex64::new(0.0, 0.0);
    let flip_flip = -a.f.conj() * b.f * cis(phases.phi_146);
    Ok(ReducedSMatrix {
        rows: [
            [
                a.p * cis(phases.phi_12),
                b.f * a.t.conj() * cis(phases.phi_246),
            ],
            [
                a.f.conj() * b.t * cis(phases.phi_136),
                b.p.conj() * cis(phases.phi_34),
            ],
            [
                -a.t * cis(phases.phi_15),
                b.f * a.p.conj() * cis(phases.phi_456),
            ],
            [
                -a.f.conj() * b.p * cis(phases.phi_167),
                b.t.conj() * cis(phases.phi_47),
            ],
            [flip_flip, zero],
            [zero, flip_flip],
        ],
    })
}

/// Two-particle amplitudes `A_σσ'` for mode 1 spin `σ` and mode 2 spin `σ'`,
/// together with the factor they have been scaled by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingAmplitudes {
    pub up_up: Complex64,
    pub down_down: Complex64,
    pub down_up: Complex64,
    pub up_down: Complex64,
    pub normalization: f64,
}

impl RingAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        [self.up_up, self.up_down, self.down_up, self.down_down]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Amplitudes in basis order `(↑↑, ↑↓, ↓↑, ↓↓)`.
    pub fn to_array(&self) -> [Complex64; 4] {
        [self.up_up, self.up_down, self.down_up, self.down_down]
    }

    pub fn to_state(&self) -> SpinState {
        SpinState::new(self.to_array().to_vec()).expect("four amplitudes")
    }

    pub fn from_state(state: &SpinState) -> Result<Self> {
        if state.len() != 4 {
            return Err(Error::Dimension(format!(
                "ring state needs 4 amplitudes, got {}",
                state.len()
            )));
        }
        let a = state.amplitudes();
        Ok(Self {
            up_up: a[0],
            up_down: a[1],
            down_up: a[2],
            down_down: a[3],
            normalization: 1.0,
        })
    }

    pub fn max_abs_diff(&self, other: &RingAmplitudes) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }
}

/// Unnormalized amplitudes written with the scattering-matrix phases.
pub fn two_particle_amplitudes_phase_form(
    junctions: &JunctionPair,
    phases: &PhaseSet,
) -> RingAmplitudes {
    let JunctionPair { a, b } = junctions;
    let flips = a.f.conj() * b.f;
    RingAmplitudes {
        up_up: b.f * (a.p.norm_sqr() + a.t.norm_sqr()) * cis(phases.phi_12 + phases.phi_456),
        down_down: a.f.conj()
            * (b.p.norm_sqr() + b.t.norm_sqr())
            * cis(phases.phi_34 + phases.phi_167),
        down_up: b.p.conj() * a.t * cis(phases.phi_15 + phases.phi_34)
            + flips * a.p.conj() * b.t * cis(phases.phi_136 + phases.phi_456),
        up_down: a.p * b.t.conj() * cis(phases.phi_12 + phases.phi_47)
            + flips * b.p * a.t.conj() * cis(phases.phi_167 + phases.phi_246),
        normalization: 1.0,
    }
}

/// Unnormalized amplitudes written with the effective path lengths. Must
/// agree with [`two_particle_amplitudes_phase_form`].
pub fn two_particle_amplitudes_pathlength_form(
    junctions: &JunctionPair,
    momentum: f64,
    geom: &RingGeometry,
) -> RingAmplitudes {
    let JunctionPair { a, b } = junctions;
    let paths = effective_path_lengths(geom);
    let l6 = geom.l(6);
    let k = momentum;
    let flips = a.f.conj() * b.f;
    RingAmplitudes {
        up_up: b.f * (a.p.norm_sqr() + a.t.norm_sqr()) * cis(k * (paths.up_up + l6)),
        down_down: a.f.conj() * (b.p.norm_sqr() + b.t.norm_sqr()) * cis(k * (paths.down_down + l6)),
        down_up: b.p.conj() * a.t * cis(k * paths.down_up)
            + flips * a.p.conj() * b.t * cis(k * (paths.down_up + 2.0 * l6)),
        up_down: a.p * b.t.conj() * cis(k * paths.up_down)
            + flips * b.p * a.t.conj() * cis(k * (paths.up_down + 2.0 * l6)),
        normalization: 1.0,
    }
}

/// Scales the amplitudes to unit total probability, recording the factor.
pub fn normalize_amplitudes(raw: &RingAmplitudes) -> Result<RingAmplitudes> {
    let norm_sqr = raw.norm_sqr();
    if norm_sqr < ZERO_NORM {
        return Err(Error::DegenerateState { norm_sqr });
    }
    let n = 1.0 / norm_sqr.sqrt();
    Ok(RingAmplitudes {
        up_up: raw.up_up * n,
        down_down: raw.down_down * n,
        down_up: raw.down_up * n,
        up_down: raw.up_down * n,
        normalization: raw.normalization * n,
    })
}

/// Everything needed to build one ring's output state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig {
    pub junctions: JunctionPair,
    pub geometry: RingGeometry,
    pub physics: RingPhysics,
}

impl RingConfig {
    pub fn new(junctions: JunctionPair, geometry: RingGeometry, physics: RingPhysics) -> Self {
        Self {
            junctions,
            geometry,
            physics,
        }
    }

    pub fn momentum(&self) -> f64 {
        edge_momentum(&self.physics)
    }

    pub fn phases(&self) -> PhaseSet {
        geometric_phases(self.momentum(), &self.geometry)
    }

    /// Normalized amplitudes of the ring's two-particle state.
    pub fn amplitudes(&self) -> Result<RingAmplitudes> {
        self.junctions.check_unitarity(UNITARITY_TOL)?;
        self.physics.validate()?;
        normalize_amplitudes(&two_particle_amplitudes_phase_form(
            &self.junctions,
            &self.phases(),
        ))
    }
}

/// Normalized two-particle state over modes (1, 2), ordered
/// `(↑↑, ↑↓, ↓↑, ↓↓)`.
pub fn ring_state(config: &RingConfig) -> Result<SpinState> {
    Ok(config.amplitudes()?.to_state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn junction(t: f64, p: f64, f: f64) -> JunctionAmplitudes {
        JunctionAmplitudes::new(c(t, 0.0), c(p, 0.0), c(f, 0.0)).unwrap()
    }

    fn pair(j: JunctionAmplitudes) -> JunctionPair {
        JunctionPair::new(j, j)
    }

    fn physics(v_f: f64, alpha: f64, energy: f64, gate: f64) -> RingPhysics {
        RingPhysics::new(v_f, alpha, energy, gate).unwrap()
    }

    fn seven() -> RingGeometry {
        RingGeometry::new([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap()
    }

    #[test]
    fn junction_rejects_non_unitary() {
        let err = JunctionAmplitudes::new(c(1.0, 0.0), c(0.4, 0.0), c(0.2, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Unitarity { .. }));
    }

    #[test]
    fn geometry_rejects_non_positive() {
        assert!(RingGeometry::new([1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(RingGeometry::new([1.0, 1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(RingGeometry::default().is_circular_symmetric());
    }

    #[test]
    fn physics_rejects_bad_velocity() {
        assert!(RingPhysics::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(RingPhysics::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn modified_velocity_examples() {
        assert_eq!(modified_fermi_velocity(&physics(3.0, 4.0, 0.0, 0.0)), 5.0);
        assert_eq!(modified_fermi_velocity(&physics(1.0, 0.0, 0.0, 0.0)), 1.0);
        let v = modified_fermi_velocity(&physics(2.0, 2.0, 0.0, 0.0));
        assert!((v - 2.0 * SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn edge_momentum_examples() {
        assert_eq!(edge_momentum(&physics(2.0, 0.0, 1.0, 1.0)), 1.0);
        assert_eq!(edge_momentum(&physics(7.3, 1.1, 1.0, -1.0)), 0.0);
        let k = edge_momentum(&physics(3.0, 4.0, 0.3, 0.2));
        assert!((k - 0.1).abs() < 1e-15);
        assert!(edge_momentum(&physics(1.0, 0.0, -1.0, 0.5)) < 0.0);
    }

    #[test]
    fn geometric_phase_examples() {
        let zero = geometric_phases(0.0, &seven());
        assert_eq!(zero, PhaseSet::zero());
        assert_eq!(zero.phi_456, 0.0);
        let phi = geometric_phases(1.0, &seven());
        assert_eq!(phi.phi_12, 3.0);
        let phi = geometric_phases(2.0, &seven());
        assert_eq!(phi.phi_456, 30.0);
        let g = RingGeometry::new([1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 1.0]).unwrap();
        assert_eq!(geometric_phases(2.0, &g).phi_456, 12.0);
        assert_eq!(geometric_phases(1.0, &seven()).phi_136, 10.0);
    }

    #[test]
    fn effective_path_length_examples() {
        let uniform = RingGeometry::new([1.0; 7]).unwrap();
        let p = effective_path_lengths(&uniform);
        assert_eq!(
            (p.up_up, p.up_down, p.down_up, p.down_down),
            (4.0, 4.0, 4.0, 4.0)
        );

        let g = RingGeometry::new([1.0, 2.0, 1.0, 4.0, 5.0, 1.0, 1.0]).unwrap();
        assert_eq!(effective_path_lengths(&g).up_up, 12.0);

        let p = effective_path_lengths(&seven());
        assert_eq!(
            (p.up_up, p.up_down, p.down_up, p.down_down),
            (12.0, 14.0, 13.0, 15.0)
        );
    }

    #[test]
    fn phase_identity_examples() {
        assert!(verify_phase_identities(1.0, &seven()));
        assert!(verify_phase_identities(0.0, &RingGeometry::default()));
        assert_eq!(phase_identity_residual(0.0, &seven()), 0.0);
    }

    #[test]
    fn smatrix_transparent_junctions() {
        let s =
            reduced_scattering_matrix(&pair(junction(0.0, 1.0, 0.0)), &PhaseSet::zero()).unwrap();
        for row in 0..6 {
            for col in 0..2 {
                let expected = match (row, col) {
                    (ReducedSMatrix::D1_UP, 0) | (ReducedSMatrix::D1_DOWN, 1) => 1.0,
                    _ => 0.0,
                };
                assert_eq!(s.entry(row, col), c(expected, 0.0), "({row}, {col})");
            }
        }
    }

    #[test]
    fn smatrix_full_tunneling() {
        let s =
            reduced_scattering_matrix(&pair(junction(1.0, 0.0, 0.0)), &PhaseSet::zero()).unwrap();
        for row in 0..6 {
            for col in 0..2 {
                let expected = match (row, col) {
                    (ReducedSMatrix::D2_UP, 0) => -1.0,
                    (ReducedSMatrix::D2_DOWN, 1) => 1.0,
                    _ => 0.0,
                };
                assert_eq!(s.entry(row, col), c(expected, 0.0), "({row}, {col})");
            }
        }
    }

    #[test]
    fn smatrix_beam_splitter() {
        let s = reduced_scattering_matrix(
            &pair(JunctionAmplitudes::beam_splitter()),
            &PhaseSet::zero(),
        )
        .unwrap();
        assert!((s.column_norm_sqr(0) - 1.0).abs() < 1e-15);
        assert!((s.column_norm_sqr(1) - 1.0).abs() < 1e-15);
        assert!((s.entry(ReducedSMatrix::D1_UP, 1) - c(0.5, 0.0)).norm() < 1e-15);
        // flip-flip rows carry exactly one nonzero entry each
        assert!(s.entry(ReducedSMatrix::FLIP_UP, 0).norm() > 0.0);
        assert_eq!(s.entry(ReducedSMatrix::FLIP_UP, 1), c(0.0, 0.0));
        assert_eq!(s.entry(ReducedSMatrix::FLIP_DOWN, 0), c(0.0, 0.0));
        assert!(s.entry(ReducedSMatrix::FLIP_DOWN, 1).norm() > 0.0);
    }

    #[test]
    fn smatrix_signs_and_conjugations() {
        let a = JunctionAmplitudes::new(c(0.3, 0.4), c(0.0, 0.5), c(0.5, -0.5)).unwrap();
        let b = JunctionAmplitudes::new(c(0.0, 0.6), c(0.48, 0.0), c(0.0, 0.64)).unwrap();
        let phi = geometric_phases(0.37, &seven());
        let s = reduced_scattering_matrix(&JunctionPair::new(a, b), &phi).unwrap();
        let e = |x: f64| Complex64::from_polar(1.0, -x);
        let expected = [
            [a.p * e(phi.phi_12), b.f * a.t.conj() * e(phi.phi_246)],
            [
                a.f.conj() * b.t * e(phi.phi_136),
                b.p.conj() * e(phi.phi_34),
            ],
            [-a.t * e(phi.phi_15), b.f * a.p.conj() * e(phi.phi_456)],
            [
                -a.f.conj() * b.p * e(phi.phi_167),
                b.t.conj() * e(phi.phi_47),
            ],
            [-a.f.conj() * b.f * e(phi.phi_146), c(0.0, 0.0)],
            [c(0.0, 0.0), -a.f.conj() * b.f * e(phi.phi_146)],
        ];
        for (row, exp_row) in expected.iter().enumerate() {
            for (col, exp) in exp_row.iter().enumerate() {
                assert!((s.entry(row, col) - exp).norm() < 1e-15, "({row}, {col})");
            }
        }
        assert!((s.column_norm_sqr(0) - 1.0).abs() < 1e-12);
        assert!((s.column_norm_sqr(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smatrix_rejects_non_unitary() {
        let bad = JunctionAmplitudes {
            t: c(0.9, 0.0),
            p: c(0.9, 0.0),
            f: c(0.0, 0.0),
        };
        let pair = JunctionPair::new(JunctionAmplitudes::beam_splitter(), bad);
        assert!(matches!(
            reduced_scattering_matrix(&pair, &PhaseSet::zero()),
            Err(Error::Unitarity { .. })
        ));
    }

    #[test]
    fn phase_form_examples() {
        let a = two_particle_amplitudes_phase_form(
            &pair(JunctionAmplitudes::beam_splitter()),
            &PhaseSet::zero(),
        );
        let q = 1.0 / (2.0 * SQRT_2);
        assert!((a.up_up - c(q, 0.0)).norm() < 1e-15);
        assert!((a.down_down - c(q, 0.0)).norm() < 1e-15);
        assert_eq!(a.down_up, c(0.0, 0.0));
        assert_eq!(a.up_down, c(0.0, 0.0));

        let h = FRAC_1_SQRT_2;
        let a = two_particle_amplitudes_phase_form(&pair(junction(h, h, 0.0)), &PhaseSet::zero());
        assert_eq!(a.up_up, c(0.0, 0.0));
        assert_eq!(a.down_down, c(0.0, 0.0));
        assert!((a.down_up - c(0.5, 0.0)).norm() < 1e-15);
        assert!((a.up_down - c(0.5, 0.0)).norm() < 1e-15);

        let a =
            two_particle_amplitudes_phase_form(&pair(junction(0.0, 1.0, 0.0)), &PhaseSet::zero());
        assert_eq!(a.norm_sqr(), 0.0);
    }

    #[test]
    fn pathlength_form_matches_at_zero_momentum() {
        let j = pair(JunctionAmplitudes::beam_splitter());
        let by_phase = two_particle_amplitudes_phase_form(&j, &PhaseSet::zero());
        let by_path = two_particle_amplitudes_pathlength_form(&j, 0.0, &seven());
        assert_eq!(by_phase, by_path);
    }

    #[test]
    fn pathlength_form_full_flip_junction() {
        let a = junction(0.0, 0.0, 1.0);
        let b = JunctionAmplitudes::new(c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)).unwrap();
        let amps = two_particle_amplitudes_pathlength_form(&JunctionPair::new(a, b), 1.0, &seven());
        assert_eq!(amps.up_up, c(0.0, 0.0));
        // p_a = 0 removes the first term; the second carries t_a* = 0 as well.
        let paths = effective_path_lengths(&seven());
        let second = a.f.conj()
            * b.f
            * b.p
            * a.t.conj()
            * Complex64::from_polar(1.0, -(paths.up_down + 12.0));
        assert_eq!(amps.up_down, second);
        assert!(amps.down_down.norm() > 0.0);
    }

    #[test]
    fn normalize_examples() {
        let raw = RingAmplitudes {
            up_up: c(1.0, 0.0),
            down_down: c(1.0, 0.0),
            down_up: c(0.0, 0.0),
            up_down: c(0.0, 0.0),
            normalization: 1.0,
        };
        let n = normalize_amplitudes(&raw).unwrap();
        assert!((n.up_up - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((n.down_down - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let zero = RingAmplitudes {
            up_up: c(0.0, 0.0),
            down_down: c(0.0, 0.0),
            ..raw
        };
        assert!(matches!(
            normalize_amplitudes(&zero),
            Err(Error::DegenerateState { .. })
        ));

        let q = 1.0 / (2.0 * SQRT_2);
        let small = RingAmplitudes {
            up_up: c(q, 0.0),
            down_down: c(q, 0.0),
            ..raw
        };
        let n = normalize_amplitudes(&small).unwrap();
        assert!((n.up_up - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((n.normalization - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ring_state_examples() {
        let zero_k = physics(1.0, 0.0, 0.0, 0.0);
        let cfg = RingConfig::new(
            pair(JunctionAmplitudes::beam_splitter()),
            RingGeometry::default(),
            zero_k,
        );
        let s = ring_state(&cfg).unwrap();
        let h = FRAC_1_SQRT_2;
        let expect = [h, 0.0, 0.0, h];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }

        let cfg = RingConfig::new(pair(junction(h, h, 0.0)), RingGeometry::default(), zero_k);
        let s = ring_state(&cfg).unwrap();
        let expect = [0.0, h, h, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }

        let cfg = RingConfig::new(
            pair(junction(0.0, 1.0, 0.0)),
            RingGeometry::default(),
            zero_k,
        );
        assert!(matches!(
            ring_state(&cfg),
            Err(Error::DegenerateState { .. })
        ));
    }
}
