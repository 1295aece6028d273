//! Random inputs for property checks and the self-check suites.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use crate::protocol::BellLabel;
use crate::ring::{JunctionAmplitudes, JunctionPair, RingGeometry};
use crate::state::SpinState;

fn unit_complex_vector<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> [Complex64; N] {
    loop {
        let v: [Complex64; N] = std::array::from_fn(|_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (1e-3..=1.0).contains(&norm) {
            return v.map(|z| z / norm);
        }
    }
}

/// Uniformly distributed junction on the unit sphere of `(t, p, f)`.
pub fn random_junction<R: Rng + ?Sized>(rng: &mut R) -> JunctionAmplitudes {
    let [t, p, f] = unit_complex_vector(rng);
    JunctionAmplitudes { t, p, f }
}

pub fn random_junction_pair<R: Rng + ?Sized>(rng: &mut R) -> JunctionPair {
    JunctionPair::new(random_junction(rng), random_junction(rng))
}

/// Random normalized single-spin state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> SpinState {
    let [a, b] = unit_complex_vector(rng);
    SpinState::qubit(a, b)
}

pub fn random_geometry<R: Rng + ?Sized>(rng: &mut R, min: f64, max: f64) -> RingGeometry {
    RingGeometry::new(std::array::from_fn(|_| rng.gen_range(min..max))).expect("positive lengths")
}

/// Random geometry with `l2 = l3` and `l5 = l7`.
pub fn random_circular_geometry<R: Rng + ?Sized>(rng: &mut R, min: f64, max: f64) -> RingGeometry {
    let mut l: [f64; 7] = std::array::from_fn(|_| rng.gen_range(min..max));
    l[2] = l[1];
    l[6] = l[4];
    RingGeometry::new(l).expect("positive lengths")
}

/// Random ring-B junctions satisfying the table row for `label` exactly.
pub fn random_row_junctions<R: Rng + ?Sized>(rng: &mut R, label: BellLabel) -> JunctionPair {
    let r: f64 = rng.gen_range(0.2..0.9);
    let t_a = Complex64::from_polar(r, rng.gen_range(0.0..TAU));
    let other = Complex64::from_polar((1.0 - r * r).sqrt(), rng.gen_range(0.0..TAU));
    let sign = label.sign().factor();
    let zero = Complex64::new(0.0, 0.0);
    let (a, b) = if label.is_phi() {
        (
            JunctionAmplitudes {
                t: t_a,
                p: zero,
                f: other,
            },
            JunctionAmplitudes {
                t: t_a.conj(),
                p: zero,
                f: other.conj() * sign,
            },
        )
    } else {
        (
            JunctionAmplitudes {
                t: t_a,
                p: other,
                f: zero,
            },
            JunctionAmplitudes {
                t: t_a.conj(),
                p: other.conj() * sign,
                f: zero,
            },
        )
    };
    JunctionPair::new(a, b)
}
