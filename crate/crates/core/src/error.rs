use thiserror::Error;

pub type Result<T, E = DpcdError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum DpcdError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("dimension mismatch on {axis}: expected {expected}, found {found}")]
    Shape {
        axis: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("numeric failure at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<DpcdError>,
    },

    #[error("unsupported constraint: {0}")]
    UnsupportedConstraint(String),

    #[error("infeasible point: {0}")]
    Infeasible(String),

    #[error("exhaustive search refused: feasible set has {size} points, limit is 2^{limit}")]
    OracleLimit { size: f64, limit: u32 },

    #[error("step bound unavailable: {0}")]
    BoundUnavailable(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DpcdError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        DpcdError::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        DpcdError::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors caused by bad input (as opposed to numeric breakdown).
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            DpcdError::NonFinite(_) | DpcdError::AtIteration { .. } | DpcdError::Singular(_)
        )
    }
}
