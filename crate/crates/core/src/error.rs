use thiserror::Error;

/// Errors surfaced by the permutation-group machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("point {point} out of range for degree {degree} (1-based)")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::MAX_DEGREE)]
    DegreeTooLarge(usize),

    #[error("group order {order} exceeds the census cap {cap}")]
    CensusCapExceeded { order: String, cap: u64 },

    #[error("coset index {index} exceeds the index cap {cap}")]
    IndexCapExceeded { index: String, cap: u64 },

    #[error("element does not belong to the group")]
    NotAMember,

    #[error("not a subgroup: generator outside the ambient group")]
    NotASubgroup,

    #[error("subgroup is not normal: conjugate of a generator escapes")]
    NotNormal,

    #[error("group is not transitive")]
    NotTransitive,

    #[error("subgroup is transitive, expected an intransitive one")]
    UnexpectedlyTransitive,

    #[error("not a minimal normal subgroup: contains a proper nontrivial normal subgroup of order {inner_order}")]
    NotMinimalNormal { inner_order: String },

    #[error("kernel of the block action is not semiregular")]
    KernelNotSemiregular,

    #[error("point list is not a base: pointwise stabilizer has order {stab_order}")]
    NotABase { stab_order: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported field size {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u32),

    #[error("invalid constructor arity or argument: {0}")]
    BadConstructor(String),

    #[error("unknown atlas entry `{0}`")]
    UnknownAtlasEntry(String),

    #[error("atlas certificate for `{name}` failed: {check}")]
    CertificateFailed { name: String, check: String },

    #[error("trilemma inapplicable: M H = M (centralizer lies inside the antiplinth)")]
    TrilemmaInapplicable,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget of {0:?} exceeded")]
    BudgetExceeded(std::time::Duration),

    #[error("no classification case matched: {0}")]
    NoCaseMatched(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
