//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("exactly one of `so_field_tesla` / `e_field_v_m` must be given")]
    BothOrNeitherSpinOrbitKnobs,

    #[error("sweep needs b_max > b_min, got [{b_min}, {b_max}]")]
    InvalidSweepRange { b_min: f64, b_max: f64 },

    #[error("sweep needs at least 16 samples, got {0}")]
    TooFewSamples(usize),

    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),

    #[error("unknown mode `{0}` (expected `physical` or `flux_only`)")]
    UnknownMode(String),

    #[error("rotation axis must be unit length, |axis| = {0}")]
    NonUnitAxis(f64),

    #[error("time-ordered product needs at least 16 steps, got {0}")]
    TooFewSteps(usize),

    #[error("effective field magnitude {0} T is below 1e-15 T; spin eigenbasis undefined")]
    DegenerateField(f64),

    #[error("curve point {index} has norm {norm}, not a unit direction")]
    NonUnitPoint { index: usize, norm: f64 },

    #[error("curve points {index} and {next} are antipodal within tolerance")]
    AntipodalStep { index: usize, next: usize },

    #[error("curve endpoints are antipodal; the closing geodesic is not unique")]
    AntipodalEndpoints,

    #[error("curve needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("solid angle requires a closed curve")]
    OpenCurve,

    #[error("curve centroid has norm {0} < 1e-9; fan apex undefined")]
    DegenerateCentroid(f64),

    #[error("detrend order {0} exceeds the maximum of 6")]
    OrderTooHigh(usize),

    #[error("column of length {len} cannot be detrended at order {order}")]
    ColumnTooShort { len: usize, order: usize },

    #[error("polynomial fit is singular")]
    DegenerateFit,

    #[error("b grid is not uniform at index {index}: spacing {got} vs {expected}")]
    NonUniformGrid { index: usize, expected: f64, got: f64 },
}
