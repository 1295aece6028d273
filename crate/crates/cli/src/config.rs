//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! ring_a.junction_a.t = [0.7071067811865476, 0.0]
//! ring_a.l2 = 540.0
//! qubit_choice = up
//! sweep.param = ring_b.junction_b.f.phase
//! ```

use num_complex::Complex64;
use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use qshi_core::protocol::{CorrectionMode, QubitChoice};
use qshi_core::ring::{
    JunctionAmplitudes, JunctionPair, RingConfig, RingGeometry, RingPhysics, UNITARITY_TOL,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionSpec {
    pub t: Complex64,
    pub p: Complex64,
    pub f: Complex64,
}

impl Default for JunctionSpec {
    fn default() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            t: zero,
            p: zero,
            f: zero,
        }
    }
}

impl JunctionSpec {
    fn amplitudes(&self) -> JunctionAmplitudes {
        JunctionAmplitudes {
            t: self.t,
            p: self.p,
            f: self.f,
        }
    }

    fn entry_mut(&mut self, name: &str) -> Option<&mut Complex64> {
        match name {
            "t" => Some(&mut self.t),
            "p" => Some(&mut self.p),
            "f" => Some(&mut self.f),
            _ => None,
        }
    }
}

/// One ring as written in the file. Nothing is validated here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub junction_a: JunctionSpec,
    pub junction_b: JunctionSpec,
    pub lengths: [f64; 7],
    pub v_f: f64,
    pub alpha: f64,
    pub energy: f64,
    pub gate: f64,
}

impl Default for RingSpec {
    fn default() -> Self {
        let physics = RingPhysics::default();
        Self {
            junction_a: JunctionSpec::default(),
            junction_b: JunctionSpec::default(),
            lengths: RingGeometry::default().lengths(),
            v_f: physics.fermi_velocity,
            alpha: physics.rashba,
            energy: physics.energy,
            gate: physics.gate,
        }
    }
}

impl RingSpec {
    /// Checks every invariant, naming the offending entry with `prefix`.
    pub fn to_ring_config(&self, prefix: &str) -> Result<RingConfig, String> {
        let pair = JunctionPair::new(self.junction_a.amplitudes(), self.junction_b.amplitudes());
        for (name, j) in [("junction_a", &pair.a), ("junction_b", &pair.b)] {
            if let Err(e) = j.check_unitarity(UNITARITY_TOL) {
                return Err(format!("{prefix}.{name}: {e}"));
            }
        }
        let geometry = RingGeometry::new(self.lengths).map_err(|e| format!("{prefix}: {e}"))?;
        let physics = RingPhysics::new(self.v_f, self.alpha, self.energy, self.gate)
            .map_err(|e| format!("{prefix}: {e}"))?;
        Ok(RingConfig::new(pair, geometry, physics))
    }

    fn scalar_mut(&mut self, name: &str) -> Option<&mut f64> {
        match name {
            "v_f" => Some(&mut self.v_f),
            "alpha" => Some(&mut self.alpha),
            "energy" => Some(&mut self.energy),
            "gate" => Some(&mut self.gate),
            _ => {
                let index: usize = name.strip_prefix('l')?.parse().ok()?;
                (1..=7)
                    .contains(&index)
                    .then(|| &mut self.lengths[index - 1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ring_a: RingSpec,
    pub ring_b: RingSpec,
    pub qubit_choice: QubitChoice,
    pub mode: CorrectionMode,
    pub seed: u64,
    /// Monte Carlo draws of the Bell outcome; 0 disables sampling.
    pub shots: u64,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            ring_a: RingSpec::default(),
            ring_b: RingSpec::default(),
            qubit_choice: QubitChoice::Up,
            mode: CorrectionMode::Constraint,
            seed: 0,
            shots: 0,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(
                f,
                "line {}, key `{}`: {}",
                self.line, self.key, self.message
            )
        }
    }
}

fn parse_real(text: &str) -> Result<f64, String> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", text.trim()))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{}` is not finite", text.trim()))
    }
}

/// `[re, im]` or a bare real number.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let text = text.trim();
    let Some(inner) = text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
        return parse_real(text).map(|x| Complex64::new(x, 0.0));
    };
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected [re, im], got `{text}`"));
    }
    Ok(Complex64::new(parse_real(parts[0])?, parse_real(parts[1])?))
}

fn split_ring<'a>(config: &'a mut RunConfig, key: &str) -> Option<(&'a mut RingSpec, String)> {
    if let Some(rest) = key.strip_prefix("ring_a.") {
        Some((&mut config.ring_a, rest.to_string()))
    } else if let Some(rest) = key.strip_prefix("ring_b.") {
        Some((&mut config.ring_b, rest.to_string()))
    } else {
        None
    }
}

fn junction_mut<'a>(ring: &'a mut RingSpec, name: &str) -> Option<&'a mut JunctionSpec> {
    match name {
        "junction_a" => Some(&mut ring.junction_a),
        "junction_b" => Some(&mut ring.junction_b),
        _ => None,
    }
}

#[derive(Default)]
struct PartialSweep {
    param: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
}

fn assign(
    config: &mut RunConfig,
    sweep: &mut PartialSweep,
    key: &str,
    value: &str,
) -> Result<(), String> {
    match key {
        "qubit_choice" => {
            config.qubit_choice = match value {
                "up" => QubitChoice::Up,
                "down" => QubitChoice::Down,
                other => return Err(format!("expected up or down, got `{other}`")),
            }
        }
        "mode" => config.mode = parse_mode(value)?,
        "seed" => {
            config.seed = value
                .parse()
                .map_err(|_| format!("`{value}` is not a u64"))?
        }
        "shots" => {
            config.shots = value
                .parse()
                .map_err(|_| format!("`{value}` is not a u64"))?
        }
        "sweep.param" => sweep.param = Some(value.to_string()),
        "sweep.start" => sweep.start = Some(parse_real(value)?),
        "sweep.stop" => sweep.stop = Some(parse_real(value)?),
        "sweep.steps" => {
            sweep.steps = Some(
                value
                    .parse()
                    .map_err(|_| format!("`{value}` is not a count"))?,
            )
        }
        _ => {
            let (ring, rest) = split_ring(config, key).ok_or("unknown key")?;
            match rest.split_once('.') {
                Some((junction, entry)) => {
                    let slot = junction_mut(ring, junction)
                        .and_then(|j| j.entry_mut(entry))
                        .ok_or("unknown key")?;
                    *slot = parse_complex(value)?;
                }
                None => *ring.scalar_mut(&rest).ok_or("unknown key")? = parse_real(value)?,
            }
        }
    }
    Ok(())
}

pub fn parse_mode(value: &str) -> Result<CorrectionMode, String> {
    match value {
        "constraint" => Ok(CorrectionMode::Constraint),
        "unitary" => Ok(CorrectionMode::Unitary),
        other => Err(format!("expected constraint or unitary, got `{other}`")),
    }
}

/// Parses the text without checking physical invariants.
pub fn parse_config(text: &str) -> Result<RunConfig, ParseError> {
    let mut config = RunConfig::default();
    let mut sweep = PartialSweep::default();
    let mut seen = HashSet::new();
    let mut sweep_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |key: &str, message: String| ParseError {
            line,
            key: key.to_string(),
            message,
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err("", format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err("", "missing key".into()));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(key, "duplicate key".into()));
        }
        if key.starts_with("sweep.") {
            sweep_line = line;
        }
        assign(&mut config, &mut sweep, key, value).map_err(|m| err(key, m))?;
    }

    config.sweep = match sweep {
        PartialSweep {
            param: None,
            start: None,
            stop: None,
            steps: None,
        } => None,
        PartialSweep {
            param: Some(param),
            start: Some(start),
            stop: Some(stop),
            steps: Some(steps),
        } => Some(SweepSpec {
            param,
            start,
            stop,
            steps,
        }),
        _ => {
            return Err(ParseError {
                line: sweep_line,
                key: "sweep".into(),
                message: "sweep needs param, start, stop and steps".into(),
            })
        }
    };
    Ok(config)
}

/// Sets the real-valued leaf `path` to `value`. Complex entries take a
/// `.re`, `.im`, `.mag` or `.phase` suffix.
pub fn set_param(config: &mut RunConfig, path: &str, value: f64) -> Result<(), String> {
    let unknown = || format!("`{path}` is not a sweepable parameter");
    let (ring, rest) = split_ring(config, path).ok_or_else(unknown)?;
    let parts: Vec<&str> = rest.split('.').collect();
    match parts.as_slice() {
        [name] => *ring.scalar_mut(name).ok_or_else(unknown)? = value,
        [junction, entry, part] => {
            let z = junction_mut(ring, junction)
                .and_then(|j| j.entry_mut(entry))
                .ok_or_else(unknown)?;
            *z = match *part {
                "re" => Complex64::new(value, z.im),
                "im" => Complex64::new(z.re, value),
                "mag" => Complex64::from_polar(value, z.arg()),
                "phase" => Complex64::from_polar(z.norm(), value),
                _ => return Err(unknown()),
            };
        }
        _ => return Err(unknown()),
    }
    Ok(())
}

/// Checked ring configurations ready for the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rings {
    pub a: RingConfig,
    pub b: RingConfig,
}

impl RunConfig {
    pub fn rings(&self) -> Result<Rings, String> {
        Ok(Rings {
            a: self.ring_a.to_ring_config("ring_a")?,
            b: self.ring_b.to_ring_config("ring_b")?,
        })
    }

    /// Load-time invariants: both rings valid, sweep well formed.
    pub fn validate(&self) -> Result<(), String> {
        self.rings()?;
        if let Some(sweep) = &self.sweep {
            if sweep.steps < 2 {
                return Err(format!("sweep.steps = {} must be at least 2", sweep.steps));
            }
            set_param(&mut self.clone(), &sweep.param, sweep.start)
                .map_err(|e| format!("sweep.param: {e}"))?;
        }
        Ok(())
    }

    /// Copy with the sweep parameter set to `value`.
    pub fn at_sweep_value(&self, value: f64) -> Result<RunConfig, String> {
        let sweep = self.sweep.as_ref().ok_or("no sweep section")?;
        let mut point = self.clone();
        set_param(&mut point, &sweep.param, value)?;
        Ok(point)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let config = parse_config(&text).map_err(CliError::Parse)?;
    config.validate().map_err(CliError::Validation)?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYMMETRIC: &str = "\
ring_a.junction_a.t = [0.7071067811865476, 0.0]
ring_a.junction_a.f = [0.7071067811865476, 0.0]
ring_a.junction_b.t = [0.7071067811865476, 0.0]
ring_a.junction_b.f = [0.7071067811865476, 0.0]
ring_b.junction_a.t = [0.7071067811865476, 0.0]
ring_b.junction_a.f = [0.7071067811865476, 0.0]
ring_b.junction_b.t = [0.7071067811865476, 0.0]
ring_b.junction_b.f = [0.7071067811865476, 0.0]  # trailing comment
";

    #[test]
    fn minimal_config_uses_defaults() {
        let config = parse_config(SYMMETRIC).unwrap();
        config.validate().unwrap();
        assert_eq!(config.ring_a.lengths, RingGeometry::default().lengths());
        assert_eq!(config.ring_b.v_f, 1.0);
        assert_eq!(config.ring_b.junction_b.p, Complex64::new(0.0, 0.0));
        assert_eq!(config.mode, CorrectionMode::Constraint);
        assert!(config.sweep.is_none());
    }

    #[test]
    fn overrides_and_scalars() {
        let text = format!("{SYMMETRIC}ring_b.l3 = 12.5\nring_a.gate = -0.25\nmode = unitary\nqubit_choice = down\nseed = 7\n");
        let config = parse_config(&text).unwrap();
        assert_eq!(config.ring_b.lengths[2], 12.5);
        assert_eq!(config.ring_a.gate, -0.25);
        assert_eq!(config.mode, CorrectionMode::Unitary);
        assert_eq!(config.qubit_choice, QubitChoice::Down);
        assert_eq!(config.seed, 7);
    }

    #[test]
    fn parse_errors_carry_line_and_key() {
        let e = parse_config("seed = 1\nring_a.l9 = 3\n").unwrap_err();
        assert_eq!((e.line, e.key.as_str()), (2, "ring_a.l9"));
        let e = parse_config("seed = 1\nseed = 2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate"));
        let e = parse_config("ring_a.junction_a.t = [1, 2, 3]").unwrap_err();
        assert_eq!(e.key, "ring_a.junction_a.t");
        assert!(parse_config("just words").is_err());
        assert!(parse_config("sweep.param = ring_a.l1").is_err());
    }

    #[test]
    fn unitarity_violation_names_junction() {
        let text = SYMMETRIC.replace(
            "ring_b.junction_a.t = [0.7071067811865476, 0.0]",
            "ring_b.junction_a.t = [0.7071067811865476, 0.0]\nring_b.junction_a.p = [0.4472135954999579, 0.0]",
        );
        // |t|² + |p|² + |f|² = 0.5 + 0.2 + 0.5
        let err = parse_config(&text).unwrap().validate().unwrap_err();
        assert!(err.contains("ring_b.junction_a"), "{err}");
    }

    #[test]
    fn sweep_section() {
        let text = format!(
            "{SYMMETRIC}sweep.param = ring_b.junction_b.f.phase\nsweep.start = 0\nsweep.stop = 1\nsweep.steps = 5\n"
        );
        let config = parse_config(&text).unwrap();
        config.validate().unwrap();
        assert_eq!(
            config.sweep.as_ref().unwrap().values(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let point = config.at_sweep_value(std::f64::consts::FRAC_PI_2).unwrap();
        let f = point.ring_b.junction_b.f;
        assert!((f - Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);

        let one_step = text.replace("sweep.steps = 5", "sweep.steps = 1");
        let err = parse_config(&one_step).unwrap().validate().unwrap_err();
        assert!(err.contains("sweep.steps"));
        let bad_path = text.replace("f.phase", "f");
        assert!(parse_config(&bad_path).unwrap().validate().is_err());
    }

    #[test]
    fn set_param_paths() {
        let mut c = parse_config(SYMMETRIC).unwrap();
        set_param(&mut c, "ring_a.l4", 3.0).unwrap();
        set_param(&mut c, "ring_b.energy", 0.2).unwrap();
        set_param(&mut c, "ring_a.junction_a.t.im", 0.5).unwrap();
        set_param(&mut c, "ring_a.junction_b.p.mag", 0.0).unwrap();
        assert_eq!(c.ring_a.lengths[3], 3.0);
        assert_eq!(c.ring_b.energy, 0.2);
        assert_eq!(c.ring_a.junction_a.t.im, 0.5);
        assert!(set_param(&mut c, "ring_c.l1", 1.0).is_err());
        assert!(set_param(&mut c, "seed", 1.0).is_err());
        assert!(set_param(&mut c, "ring_a.junction_a.t.arg", 1.0).is_err());
    }
}
