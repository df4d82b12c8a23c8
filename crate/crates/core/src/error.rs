use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A query fell outside a precomputed table. `required` is the smallest
    /// table bound that would answer it.
    #[error("value {value} is outside the sieve range (limit {limit}); a sieve of at least {required} is required")]
    OutOfRange { value: u64, limit: u64, required: u64 },

    #[error("internal limit reached: {0}")]
    InternalLimit(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line tool. 1 is reserved for
    /// "a check ran and failed", 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format { .. } => 2,
            Error::InvalidArgument(_) => 3,
            Error::ResourceLimit(_) => 4,
            Error::OutOfRange { .. } => 5,
            Error::InternalLimit(_) => 6,
            Error::InsufficientData(_) => 7,
            Error::Inconsistent(_) => 8,
            Error::Io(_) => 9,
        }
    }
}
