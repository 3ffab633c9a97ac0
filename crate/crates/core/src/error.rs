use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A raw matrix does not define a homomorphism of the abelian group.
    #[error("matrix entry ({row}, {col}) does not define a homomorphism")]
    IllDefinedEndo { row: usize, col: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An asserted algebraic property failed. Always indicates a bug or a
    /// genuine counterexample, never bad input.
    #[error("property violation: {0}")]
    Violation(String),

    #[error("construction inapplicable: derived subgroup has order {0}, expected p")]
    DerivedOrder(u64),

    #[error("subgroup is not regular")]
    NotRegular,

    #[error("gamma table is not closed at pair ({x}, {y})")]
    NotClosed { x: usize, y: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Violation(_) | Error::NotClosed { .. } => 1,
            Error::Budget(_) => 2,
            Error::InvalidInput(_)
            | Error::IllDefinedEndo { .. }
            | Error::DerivedOrder(_)
            | Error::NotRegular => 3,
        }
    }
}
