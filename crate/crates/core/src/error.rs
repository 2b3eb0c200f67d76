use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inner product is not positive definite")]
    NotPositiveDefinite,
    #[error("capacity exceeded: {what} is {found}, limit {limit}")]
    CapacityExceeded {
        what: &'static str,
        limit: usize,
        found: usize,
    },
    #[error("ray is zero")]
    ZeroRay,
    #[error("flow diverges: weight `{0}` pairs positively with the ray")]
    DivergentFlow(String),
    #[error("point is semistable, nothing to destabilize")]
    NotDestabilizable,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("filtration type has a single step, the object is semistable")]
    SemistableType,
    #[error("topological condition violated: slope of E is {slope} > tau = {tau}")]
    TopologicalConditionViolated { slope: String, tau: String },
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("ambiguous lattice: {0}")]
    AmbiguousLattice(String),
    #[error("no filtration satisfies the pair conditions")]
    NoFiltrationFound,
    #[error("{0} filtrations satisfy the pair conditions")]
    MultipleFiltrationsFound(usize),
    #[error("pair is already tau-semistable")]
    AlreadySemistable,
    #[error("invalid breakpoint: {0}")]
    InvalidBreakpoint(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
