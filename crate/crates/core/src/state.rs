//! Pure spin states of one to three spin-1/2 modes and the handful of
//! operations the teleportation protocol needs on them.
//!
//! Basis convention: `↑` is index 0, `↓` is index 1, and the leftmost
//! subsystem is the most significant bit of the amplitude index. Subsystems
//! are addressed with 0-based positions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for exact algebraic identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Lowest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Squared norms below this are treated as the zero vector.
pub const ZERO_NORM: f64 = 1e-15;

const MAX_SPINS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: Vec<Complex64>,
}

impl SpinState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        match amplitudes.len() {
            2 | 4 | 8 => Ok(Self { amplitudes }),
            n => Err(Error::Dimension(format!(
                "{n} amplitudes; expected 2, 4 or 8"
            ))),
        }
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Single-spin state `alpha|↑⟩ + beta|↓⟩`.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Self {
        Self {
            amplitudes: vec![alpha, beta],
        }
    }

    pub fn up() -> Self {
        Self::qubit(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn down() -> Self {
        Self::qubit(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn zeros(num_spins: usize) -> Result<Self> {
        if num_spins == 0 || num_spins > MAX_SPINS {
            return Err(Error::Dimension(format!("{num_spins} spins")));
        }
        Ok(Self {
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << num_spins],
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn num_spins(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EXACT_TOL
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sqr() < ZERO_NORM
    }

    /// Rescales to unit norm. The zero vector cannot be normalized.
    pub fn normalized(&self) -> Result<Self> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr < ZERO_NORM {
            return Err(Error::DegenerateState { norm_sqr });
        }
        Ok(self.scaled(Complex64::new(1.0 / norm_sqr.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        self.scaled(Complex64::from_polar(1.0, theta))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "inner product of {} and {} amplitudes",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a 2x2 operator to a single-spin state.
    pub fn apply_2x2(&self, op: [[Complex64; 2]; 2]) -> Result<Self> {
        if self.len() != 2 {
            return Err(Error::Dimension(format!(
                "2x2 operator on {} amplitudes",
                self.len()
            )));
        }
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        Ok(Self::qubit(
            op[0][0] * a + op[0][1] * b,
            op[1][0] * a + op[1][1] * b,
        ))
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }
}

/// Result of a partial projection: the squared norm of the partial inner
/// product and the unnormalized state left on the untouched subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub probability: f64,
    pub residual: SpinState,
}

impl Projection {
    /// True when the branch is below the noise floor and its residual is
    /// effectively the zero vector.
    pub fn is_zero(&self) -> bool {
        self.probability < ZERO_NORM
    }
}

/// Kronecker product `a ⊗ b`, `a` on the more significant subsystems.
pub fn tensor(a: &SpinState, b: &SpinState) -> Result<SpinState> {
    let len = a.len() * b.len();
    if len > 1 << MAX_SPINS {
        return Err(Error::Dimension(format!(
            "tensor product would have {len} amplitudes"
        )));
    }
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    SpinState::new(amplitudes)
}

fn bit(index: usize, subsystem: usize, num_spins: usize) -> usize {
    (index >> (num_spins - 1 - subsystem)) & 1
}

fn gather(index: usize, subsystems: &[usize], num_spins: usize) -> usize {
    subsystems
        .iter()
        .fold(0, |acc, &s| (acc << 1) | bit(index, s, num_spins))
}

fn check_subsystems(subsystems: &[usize], num_spins: usize) -> Result<()> {
    for (i, &s) in subsystems.iter().enumerate() {
        if s >= num_spins {
            return Err(Error::Dimension(format!(
                "subsystem {s} out of range for {num_spins} spins"
            )));
        }
        if subsystems[..i].contains(&s) {
            return Err(Error::Dimension(format!("subsystem {s} listed twice")));
        }
    }
    Ok(())
}

/// Projects `on_subsystems` of `state` onto `projector`.
///
/// The projector's spins are matched to `on_subsystems` in the order given.
/// The residual lives on the remaining subsystems, kept in ascending order,
/// and is not renormalized.
pub fn project(
    state: &SpinState,
    projector: &SpinState,
    on_subsystems: &[usize],
) -> Result<Projection> {
    let n = state.num_spins();
    check_subsystems(on_subsystems, n)?;
    if projector.num_spins() != on_subsystems.len() {
        return Err(Error::Dimension(format!(
            "{}-spin projector on {} subsystems",
            projector.num_spins(),
            on_subsystems.len()
        )));
    }
    if on_subsystems.len() == n {
        return Err(Error::Dimension(
            "projection must leave at least one subsystem".into(),
        ));
    }
    projector.require_normalized()?;

    let rest: Vec<usize> = (0..n).filter(|s| !on_subsystems.contains(s)).collect();
    let mut residual = SpinState::zeros(rest.len())?;
    for (index, amp) in state.amplitudes.iter().enumerate() {
        let s = gather(index, on_subsystems, n);
        let r = gather(index, &rest, n);
        residual.amplitudes[r] += projector.amplitudes[s].conj() * amp;
    }
    Ok(Projection {
        probability: residual.norm_sqr(),
        residual,
    })
}

/// Squared overlap `|⟨a|b⟩|²` of two normalized states.
pub fn fidelity(a: &SpinState, b: &SpinState) -> Result<f64> {
    a.require_normalized()?;
    b.require_normalized()?;
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Concurrence `2|a↑↑ a↓↓ − a↑↓ a↓↑|` of a normalized two-spin pure state.
pub fn concurrence(state: &SpinState) -> Result<f64> {
    if state.len() != 4 {
        return Err(Error::Dimension(format!(
            "concurrence needs 4 amplitudes, got {}",
            state.len()
        )));
    }
    state.require_normalized()?;
    let a = &state.amplitudes;
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn pure(state: &SpinState) -> Self {
        let v = &state.amplitudes;
        let d = v.len();
        Self {
            matrix: DMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (self.entry(i, j) - self.entry(j, i).conj()).norm() <= tol))
    }

    /// Eigenvalues in ascending order; assumes Hermitian input.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.eigenvalues().iter().all(|&e| e >= -PSD_TOL)
    }

    /// `½ tr|ρ − σ|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "trace distance between {}x{} and {}x{}",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        let diff = DensityMatrix {
            matrix: &self.matrix - &other.matrix,
        };
        Ok(0.5 * diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
    }
}

/// Partial trace of a normalized pure state over every subsystem not in
/// `keep`. Kept subsystems appear in ascending order.
pub fn reduced_density(state: &SpinState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_spins();
    check_subsystems(keep, n)?;
    if keep.is_empty() {
        return Err(Error::Dimension("nothing to keep".into()));
    }
    state.require_normalized()?;

    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..n).filter(|s| !kept.contains(s)).collect();
    let d = 1 << kept.len();
    let mut matrix = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (i, ai) in state.amplitudes.iter().enumerate() {
        for (j, aj) in state.amplitudes.iter().enumerate() {
            if gather(i, &traced, n) == gather(j, &traced, n) {
                matrix[(gather(i, &kept, n), gather(j, &kept, n))] += ai * aj.conj();
            }
        }
    }
    Ok(DensityMatrix { matrix })
}
