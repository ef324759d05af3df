use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input value (negative photon number, bad index, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The expansion-order formula has no valid value for these parameters.
    #[error("planner domain violation: {0}")]
    Planner(String),

    /// A configured resource limit would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("insufficient data: {needed} positive points needed, {found} available")]
    InsufficientData { needed: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable machine-readable tag used on the CLI diagnostic stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Domain(_) => "domain",
            Error::Planner(_) => "planner_domain",
            Error::Resource(_) => "resource",
            Error::Unsupported(_) => "unsupported_configuration",
            Error::DegenerateChannel(_) => "degenerate_channel",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::Io(_) => "io",
        }
    }
}
