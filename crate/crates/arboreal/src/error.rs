use thiserror::Error;

/// Crate-wide error type. Variants correspond to documented precondition
/// violations and internal cap exhaustion; nothing here is a panic in disguise.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("invalid ground field: {0}")]
    InvalidGroundField(String),
    #[error("threshold index must be >= 1 (nu_0 is -infinity by convention)")]
    InvalidNuIndex,
    #[error("operation requires wild mode (l = p)")]
    TameModeInput,
    #[error("operation requires tame mode (p does not divide l)")]
    WildModeInput,
    #[error("fewer than two finite points; lower hull undefined")]
    FewerThanTwoFinitePoints,
    #[error("duplicate abscissa {0} in point list")]
    DuplicateAbscissa(u32),
    #[error("zero polynomial: every coefficient has valuation infinity")]
    ZeroPolynomial,
    #[error("leading coefficient must have finite valuation")]
    InfiniteLeadingCoefficient,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("v(c) >= nu_infinity; construction requires v(c) < nu_infinity")]
    VcNotBelowNuInfinity,
    #[error("parameters lie outside every supported difference-sequence regime")]
    OutsideDnRegimes,
    #[error("fixed-point data required in the v(c) = nu_infinity regime")]
    MissingFixedPointData,
    #[error("v(a-b) unknown; shallow ramification bound needs it")]
    MissingFixedPointValuation,
    #[error("no valid bound parameter r exists: requires v(c) < 0")]
    NoValidR,
    #[error("residue report required for the nonnegative tame regime")]
    MissingResidueReport,
    #[error("exact-cycle flag required for the single-cycle-mod-m branch")]
    MissingExactCycleFlag,
    #[error("0 and a do not lie in a single cycle mod m: {0}")]
    NotSingleCycleModM(String),
    #[error("value is not p-integral: {0}")]
    NotPIntegral(String),
    #[error("no irreducible polynomial found (degree {0} over F_{1})")]
    NoIrreducibleFound(usize, u64),
    #[error("invalid break filtration: {0}")]
    InvalidFiltration(String),
    #[error("incompatible filtration pair: {0}")]
    IncompatibleFiltrations(String),
    #[error("invalid tree automorphism data: {0}")]
    InvalidTreeAut(String),
    #[error("degree cap exceeded: needed {needed}, cap {cap}")]
    DegreeCapExceeded { needed: usize, cap: usize },
    #[error("resultant cap exceeded: squared degree {needed}, cap {cap}")]
    ResultantCapExceeded { needed: usize, cap: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not separable (difference resultant has z-multiplicity {found}, degree {degree})")]
    NotSeparable { found: usize, degree: usize },
    #[error("prediction undefined: valuation recursion is indeterminate at level {0}")]
    IndeterminateRegime(usize),
    #[error("malformed rational `{0}`: expected `num` or `num/den`")]
    MalformedRational(String),
    #[error("cli: {0}")]
    Cli(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line surface: 2 for bad input or
    /// violated preconditions, 3 for internal cap exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegreeCapExceeded { .. } | Error::ResultantCapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
