use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Error)]
pub enum SimError {
    /// An input lies outside the domain of the formula being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at the vortex core, where the azimuthal gradient diverges.
    #[error("singular at vortex center (radius = {radius} m)")]
    Singularity { radius: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("under-resolved: {0}")]
    Resolution(String),

    #[error("invalid configuration:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed {kind} file: {reason}")]
    Format { kind: &'static str, reason: String },
}

/// One violated field in a run configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("  {}: {}", v.field, v.message))
        .collect::<Vec<_>>()
        .join("\n")
}

impl SimError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SimError::Domain(msg.into())
    }
}

/// Non-fatal diagnostics attached to a computed result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The projection grid cannot resolve the spiral step.
    StepUnresolved { step_m: f64, sample_m: f64 },
    /// Coherence widths fall below a tenth of a pixel; visibility is reported as 1.
    CoherenceUnresolved { sigma_m: f64, pitch_m: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::StepUnresolved { step_m, sample_m } => write!(
                f,
                "spiral step of {step_m:e} m spans fewer than 2 projection samples ({sample_m:e} m each)"
            ),
            Warning::CoherenceUnresolved { sigma_m, pitch_m } => write!(
                f,
                "coherence unresolved at this grid: sigma {sigma_m:e} m < pitch/10 ({pitch_m:e} m)"
            ),
        }
    }
}

/// A value together with the warnings raised while producing it.
#[derive(Debug, Clone)]
pub struct Diagnosed<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Diagnosed<T> {
    pub fn clean(value: T) -> Self {
        Self {
            value,
            warnings: Vec::new(),
        }
    }
}
