use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    /// A denominator hit zero (exactly, or below the zero guard).
    #[error("pole in {context} at index {index}")]
    Pole { context: String, index: i64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// A sampled configuration whose evaluation loses too many digits to cancellation.
    #[error("ill-conditioned sample: {0}")]
    IllConditioned(String),
}

impl Error {
    pub fn pole(context: impl Into<String>, index: i64) -> Self {
        Error::Pole {
            context: context.into(),
            index,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Error::Pole { .. })
    }

    /// Poles and ill-conditioned samples: the draw is degenerate, not the code.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::IllConditioned(_))
    }
}
