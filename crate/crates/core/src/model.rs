//! Physical constants, ring configuration, and derived quantities.
//!
//! Everything downstream works in SI units: the applied field in tesla, the
//! in-plane spin-orbit field −(λ/c²) v×E also in tesla, lengths in metres.
//! A validated [`RingConfig`] is an immutable value; sweeps copy it freely
//! across worker threads.

use crate::error::{Error, Result};
use std::fmt::Write as _;

/// 3-vectors for fields, velocities and directions on the unit sphere.
pub type Vec3 = nalgebra::Vector3<f64>;

/// CODATA 2018 constants. `h`, `e` and `c` are exact by definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Planck constant (J·s)
    pub h: f64,
    /// Elementary charge (C)
    pub e: f64,
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Bohr magneton (J/T)
    pub mu_b: f64,
    /// Speed of light (m/s)
    pub c: f64,
}

/// The one set of constants used throughout the crate.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    h: 6.626_070_15e-34,
    e: 1.602_176_634e-19,
    hbar: 6.626_070_15e-34 / (2.0 * std::f64::consts::PI),
    mu_b: 9.274_010_078_3e-24,
    c: 2.997_924_58e8,
};

/// Flux change that shifts the two-path phase by 2π: h/e, in weber.
pub const FLUX_QUANTUM: f64 = CONSTANTS.h / CONSTANTS.e;

/// How the sweep treats the spin sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Arm propagators follow the applied field at every sample; the Zeeman
    /// phase grows with b and modulates the oscillation.
    Physical,
    /// Arm propagators are frozen at the sweep midpoint b_ref and only the
    /// enclosed-flux phase varies, giving an exactly h/e-periodic signal.
    FluxOnly,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::FluxOnly => "flux_only",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(Mode::Physical),
            "flux_only" => Ok(Mode::FluxOnly),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

/// The user's spin-orbit knob: either the in-plane field directly (tesla) or
/// the effective electric field it derives from (V/m). Exactly one is given;
/// the original choice is kept so a validated config serializes back to the
/// same file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinOrbitKnob {
    SoField(f64),
    EField(f64),
}

/// Ring geometry, carrier dynamics and sweep mode; the single source of
/// physical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig {
    /// Ring radius (m)
    pub radius: f64,
    /// Carrier speed along the arms (m/s)
    pub fermi_velocity: f64,
    /// Landé g-factor (dimensionless, sign allowed)
    pub g_factor: f64,
    /// λ prefactor on the motional term: 1/2 for an electron, 1 for a
    /// neutral dipole.
    pub thomas_factor: f64,
    /// Spin-orbit knob as given by the user.
    pub spin_orbit: SpinOrbitKnob,
    /// R0 in R = R0 / T (ohm)
    pub resistance_scale: f64,
    pub mode: Mode,
    /// Time-ordered product steps per arm.
    pub spin_steps: usize,
}

impl Default for RingConfig {
    /// Conventions for a ~1 μm GaAs ring; the g-factor and Fermi velocity are
    /// typical 2DEG magnitudes, not measured values.
    fn default() -> Self {
        RingConfig {
            radius: 0.5e-6,
            fermi_velocity: 1.0e5,
            g_factor: 0.44,
            thomas_factor: 0.5,
            spin_orbit: SpinOrbitKnob::SoField(0.0),
            resistance_scale: 100.0,
            mode: Mode::Physical,
            spin_steps: 4096,
        }
    }
}

impl RingConfig {
    /// In-plane spin-orbit field magnitude (tesla). For an e_field knob this
    /// is λ·v·E/c², the tesla-valued form of the motional term.
    pub fn so_field(&self) -> f64 {
        match self.spin_orbit {
            SpinOrbitKnob::SoField(b) => b,
            SpinOrbitKnob::EField(e) => {
                self.thomas_factor * self.fermi_velocity * e / (CONSTANTS.c * CONSTANTS.c)
            }
        }
    }

    /// Enclosed area πr² (m²).
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    /// Time to traverse one arm: πr/v (s).
    pub fn traversal_time(&self) -> f64 {
        std::f64::consts::PI * self.radius / self.fermi_velocity
    }

    /// Check invariants; returns the config unchanged on success.
    pub fn validate(self) -> Result<Self> {
        positive("radius_m", self.radius)?;
        positive("fermi_velocity_m_s", self.fermi_velocity)?;
        positive("resistance_scale_ohm", self.resistance_scale)?;
        positive("thomas_factor", self.thomas_factor)?;
        if !self.g_factor.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "g_factor",
                value: self.g_factor,
            });
        }
        match self.spin_orbit {
            SpinOrbitKnob::SoField(b) if !b.is_finite() || b < 0.0 => {
                return Err(Error::NonPositiveParameter {
                    name: "so_field_tesla",
                    value: b,
                })
            }
            SpinOrbitKnob::EField(e) if !e.is_finite() || e < 0.0 => {
                return Err(Error::NonPositiveParameter {
                    name: "e_field_v_m",
                    value: e,
                })
            }
            _ => {}
        }
        if self.spin_steps < 16 {
            return Err(Error::TooFewSteps(self.spin_steps));
        }
        Ok(self)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter { name, value })
    }
}

/// Uniform field sweep, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub b_min: f64,
    pub b_max: f64,
    pub n_samples: usize,
}

impl SweepConfig {
    pub fn validate(self) -> Result<Self> {
        if !(self.b_max > self.b_min) {
            return Err(Error::InvalidSweepRange {
                b_min: self.b_min,
                b_max: self.b_max,
            });
        }
        if self.n_samples < 16 {
            return Err(Error::TooFewSamples(self.n_samples));
        }
        Ok(self)
    }

    /// Grid spacing (b_max − b_min)/(n − 1).
    pub fn step(&self) -> f64 {
        (self.b_max - self.b_min) / (self.n_samples - 1) as f64
    }

    /// The k-th field sample.
    pub fn sample(&self, k: usize) -> f64 {
        self.b_min + k as f64 * self.step()
    }

    /// Midpoint of the sweep; the reference field for flux-only freezing.
    pub fn b_ref(&self) -> f64 {
        0.5 * (self.b_min + self.b_max)
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            b_min: 0.0,
            b_max: 0.3,
            n_samples: 4096,
        }
    }
}

/// Quantities derived from a config at a given field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Enclosed area (m²)
    pub area: f64,
    /// Arm traversal time (s)
    pub traversal_time: f64,
    /// Spin precession rate |g|·μ_B·|𝓑|/ħ (rad/s)
    pub larmor_rate: f64,
    /// Orbital angular rate v/r (rad/s)
    pub orbit_rate: f64,
    /// larmor_rate / orbit_rate; ≫ 1 means the spin stays pinned to the
    /// local field direction.
    pub adiabaticity: f64,
}

/// Derived quantities at applied field `b` ≥ 0. The field magnitude seen by
/// the spin is √(b² + so²): the in-plane part tilts 𝓑 but never changes it.
pub fn derived(config: &RingConfig, b: f64) -> DerivedQuantities {
    let so = config.so_field();
    let magnitude = b.hypot(so);
    let larmor_rate = config.g_factor.abs() * CONSTANTS.mu_b * magnitude / CONSTANTS.hbar;
    let orbit_rate = config.fermi_velocity / config.radius;
    DerivedQuantities {
        area: config.area(),
        traversal_time: config.traversal_time(),
        larmor_rate,
        orbit_rate,
        adiabaticity: larmor_rate / orbit_rate,
    }
}

/// A full parsed configuration file: ring plus sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub ring: RingConfig,
    pub sweep: SweepConfig,
}

impl SimulationConfig {
    pub fn validate(self) -> Result<Self> {
        Ok(SimulationConfig {
            ring: self.ring.validate()?,
            sweep: self.sweep.validate()?,
        })
    }
}

/// Parse the flat `key = value` config format. `#` starts a comment; blank
/// lines are skipped; unknown keys are rejected. Exactly one of
/// `so_field_tesla` / `e_field_v_m` must appear. Keys not present fall back
/// to the defaults.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let mut ring = RingConfig::default();
    let mut sweep = SweepConfig::default();
    let mut so_field: Option<f64> = None;
    let mut e_field: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigSyntax {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let num = |value: &str| -> Result<f64> {
            value.parse::<f64>().map_err(|_| Error::ConfigSyntax {
                line: line_no,
                message: format!("`{value}` is not a number"),
            })
        };
        let count = |value: &str| -> Result<usize> {
            value.parse::<usize>().map_err(|_| Error::ConfigSyntax {
                line: line_no,
                message: format!("`{value}` is not a count"),
            })
        };
        match key {
            "radius_m" => ring.radius = num(value)?,
            "fermi_velocity_m_s" => ring.fermi_velocity = num(value)?,
            "g_factor" => ring.g_factor = num(value)?,
            "thomas_factor" => ring.thomas_factor = num(value)?,
            "so_field_tesla" => so_field = Some(num(value)?),
            "e_field_v_m" => e_field = Some(num(value)?),
            "resistance_scale_ohm" => ring.resistance_scale = num(value)?,
            "mode" => ring.mode = Mode::parse(value)?,
            "b_min_tesla" => sweep.b_min = num(value)?,
            "b_max_tesla" => sweep.b_max = num(value)?,
            "n_samples" => sweep.n_samples = count(value)?,
            "spin_steps" => ring.spin_steps = count(value)?,
            other => return Err(Error::UnknownConfigKey(other.to_string())),
        }
    }

    ring.spin_orbit = match (so_field, e_field) {
        (Some(b), None) => SpinOrbitKnob::SoField(b),
        (None, Some(e)) => SpinOrbitKnob::EField(e),
        _ => return Err(Error::BothOrNeitherSpinOrbitKnobs),
    };

    SimulationConfig { ring, sweep }.validate()
}

/// Serialize back to the flat text format. Floats use the shortest
/// round-trip representation, so parse ∘ serialize is the identity on
/// validated configs.
pub fn serialize_config(config: &SimulationConfig) -> String {
    let mut out = String::new();
    let ring = &config.ring;
    let sweep = &config.sweep;
    let _ = writeln!(out, "radius_m = {}", ring.radius);
    let _ = writeln!(out, "fermi_velocity_m_s = {}", ring.fermi_velocity);
    let _ = writeln!(out, "g_factor = {}", ring.g_factor);
    let _ = writeln!(out, "thomas_factor = {}", ring.thomas_factor);
    match ring.spin_orbit {
        SpinOrbitKnob::SoField(b) => {
            let _ = writeln!(out, "so_field_tesla = {b}");
        }
        SpinOrbitKnob::EField(e) => {
            let _ = writeln!(out, "e_field_v_m = {e}");
        }
    }
    let _ = writeln!(out, "resistance_scale_ohm = {}", ring.resistance_scale);
    let _ = writeln!(out, "mode = {}", ring.mode.name());
    let _ = writeln!(out, "b_min_tesla = {}", sweep.b_min);
    let _ = writeln!(out, "b_max_tesla = {}", sweep.b_max);
    let _ = writeln!(out, "n_samples = {}", sweep.n_samples);
    let _ = writeln!(out, "spin_steps = {}", ring.spin_steps);
    out
}
