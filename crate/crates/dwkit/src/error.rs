use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {reason}")]
    NotAGroup {
        reason: String,
        /// First violating triple (a, b, c) when the failure is about a product.
        witness: Option<(usize, usize, usize)>,
    },
    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),
    #[error("not a homomorphism: {0}")]
    InvalidHom(String),
    #[error("budget exceeded for {what}: {rows}x{cols} matrix with ~{nnz} nonzero entries (budget {budget})")]
    BudgetExceeded {
        what: String,
        rows: usize,
        cols: usize,
        nnz: usize,
        budget: usize,
    },
    #[error("no solution over {ring}")]
    NoSolution { ring: String },
    #[error("elements {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("unknown cocycle family `{0}`")]
    UnknownFamily(String),
    #[error("integrand is not gauge invariant along morphism {0}")]
    NotGaugeInvariant(usize),
    #[error("invalid non-abelian cocycle: {0}")]
    InvalidCocycle(String),
    #[error("section is not valid: {0}")]
    SectionNotValid(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("not a boundary pair: {0}")]
    NotABoundaryPair(String),
    #[error("incompatible phases: {0}")]
    IncompatiblePhases(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub fn no_solution(modulus: Option<u64>) -> Self {
        Error::NoSolution {
            ring: match modulus {
                Some(m) => format!("Z/{m}"),
                None => "Z".to_string(),
            },
        }
    }

    pub fn is_no_solution(&self) -> bool {
        matches!(self, Error::NoSolution { .. })
    }
}
