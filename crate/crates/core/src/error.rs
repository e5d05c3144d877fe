use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Operand shapes are incompatible for the requested operation.
    Dimension { op: &'static str, detail: String },
    /// An operation produced or was handed values outside its numeric domain
    /// (NaN/Inf outputs, log of a non-positive value, ...).
    NumericDomain { op: &'static str, detail: String },
    /// Backward was seeded with a tensor whose shape differs from the root output.
    SeedShape { expected: Vec<usize>, got: Vec<usize> },
    /// Attention over an empty batch.
    EmptyBatch,
    /// Planar flow direction vector w is zero; the constraint projection is undefined.
    DegenerateDirection,
    /// |1 + u'psi(z)| fell below threshold; the flow Jacobian is numerically singular.
    SingularJacobian { min_abs: f64 },
    /// A Gaussian was parameterized with a non-positive variance entry.
    NonPositiveVariance { value: f64 },
    /// ODE state went non-finite at the given step.
    Diverged { step: usize },
    /// Training loss went non-finite on the given batch.
    TrainingDiverged { epoch: usize, batch: usize },
    /// A data channel has zero variance and cannot be z-scored.
    ZeroVariance { channel: usize },
    /// Malformed dataset file.
    Csv { line: usize, detail: String },
    /// Incomplete samples rejected by the loader (sample id -> missing/duplicate info).
    IncompleteSamples { report: Vec<String> },
    /// Bad experiment configuration.
    Config(String),
    /// Malformed checkpoint file.
    Checkpoint(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { op, detail } => write!(f, "dimension error in {op}: {detail}"),
            Error::NumericDomain { op, detail } => {
                write!(f, "numeric domain error in {op}: {detail}")
            }
            Error::SeedShape { expected, got } => {
                write!(f, "backward seed shape {got:?} does not match output shape {expected:?}")
            }
            Error::EmptyBatch => write!(f, "attention requires at least one input"),
            Error::DegenerateDirection => {
                write!(f, "planar flow direction w is zero; constraint projection undefined")
            }
            Error::SingularJacobian { min_abs } => {
                write!(f, "flow Jacobian numerically singular (min |1 + u'psi| = {min_abs:e})")
            }
            Error::NonPositiveVariance { value } => {
                write!(f, "non-positive variance {value}")
            }
            Error::Diverged { step } => write!(f, "integration diverged at step {step}"),
            Error::TrainingDiverged { epoch, batch } => {
                write!(f, "training loss non-finite at epoch {epoch}, batch {batch}")
            }
            Error::ZeroVariance { channel } => {
                write!(f, "channel {channel} has zero variance; cannot normalize")
            }
            Error::Csv { line, detail } => write!(f, "csv line {line}: {detail}"),
            Error::IncompleteSamples { report } => {
                write!(f, "incomplete samples: {}", report.join("; "))
            }
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Checkpoint(msg) => write!(f, "checkpoint error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
