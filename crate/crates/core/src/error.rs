use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed group descriptor `{input}`: {reason}")]
    MalformedDescriptor { input: String, reason: String },

    #[error("generators are not permutations: {0}")]
    GeneratorsNotPermutations(String),

    #[error("group closure exceeds the limit of {limit} elements")]
    ClosureExceedsLimit { limit: usize },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("objects were built on different groups")]
    GroupMismatch,

    #[error("character table computation failed to split eigenspaces after {attempts} attempts")]
    EigenSplittingFailed { attempts: usize },

    #[error("character table is corrupt: {0}")]
    TableCorrupt(String),

    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("length is nonzero at the identity ({0})")]
    NonzeroAtIdentity(f64),

    #[error("length is negative on class {class} ({value})")]
    NegativeValue { class: usize, value: f64 },

    #[error("length differs on class {class} and its inverse class {inverse}")]
    InversionAsymmetric { class: usize, inverse: usize },

    #[error("non-finite numeric input")]
    NonFinite,

    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidueTooLarge(f64),

    #[error("singular linear system while inverting the character matrix")]
    SingularSystem,

    #[error("length is not strict (zero on a non-identity class)")]
    LengthNotStrict,

    #[error("group is not abelian")]
    GroupNotAbelian,

    #[error("irrep index {index} out of range ({count} irreps)")]
    IrrepOutOfRange { index: usize, count: usize },

    #[error("time out of range: {0}")]
    TimeOutOfRange(f64),

    #[error("class function is not hermitian (f(C^-1) != conj f(C))")]
    NotHermitian,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("spectral mismatch between character decomposition and dense eigensolver: {0:e}")]
    SpectralMismatch(f64),
}

impl Error {
    /// Errors that indicate a bug or a disagreement between independent routes,
    /// as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_)
                | Error::SpectralMismatch(_)
                | Error::TableCorrupt(_)
                | Error::EigenSplittingFailed { .. }
                | Error::SingularSystem
        )
    }
}
