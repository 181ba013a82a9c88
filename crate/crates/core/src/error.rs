use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate element {element}: {reason}")]
    DegenerateElement { element: usize, reason: String },

    #[error("crack insertion failed: {0}")]
    Crack(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("degenerate patch at node {0}")]
    DegeneratePatch(usize),

    #[error("zero reference norm: {0}")]
    ZeroNorm(String),

    #[error("J-domain collision: {0}")]
    JDomainCollision(String),

    #[error("no driving force: both stress intensity factors vanish")]
    NoDrivingForce,

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::Step { step, source: Box::new(self) }
    }

    /// Short stable identifier, used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::InvalidMesh(_) => "invalid_mesh",
            Error::DegenerateElement { .. } => "degenerate_element",
            Error::Crack(_) => "crack",
            Error::SingularSystem(_) => "singular_system",
            Error::NotPositiveDefinite(_) => "not_positive_definite",
            Error::DegeneratePatch(_) => "degenerate_patch",
            Error::ZeroNorm(_) => "zero_norm",
            Error::JDomainCollision(_) => "jdomain_collision",
            Error::NoDrivingForce => "no_driving_force",
            Error::SingularPoint(_) => "singular_point",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Step { source, .. } => source.kind(),
            Error::Io(_) => "io",
        }
    }
}
