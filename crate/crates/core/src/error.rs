use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("facets have mixed sizes ({0} and {1})")]
    MixedDimension(usize, usize),
    #[error("vertex {vertex} outside 1..={m}")]
    BadVertex { vertex: u32, m: u32 },
    #[error("facet {0:?} is contained in another facet")]
    NotPure(Vec<u32>),
    #[error("duplicate facet {0:?}")]
    DuplicateFacet(Vec<u32>),
    #[error("vertex {0} lies in no facet")]
    UnusedVertex(u32),
    #[error("complex has no facets")]
    Empty,
    #[error("{what} too small: {got} < {min}")]
    TooSmall { what: &'static str, got: usize, min: usize },
    #[error("{0:?} is not a face")]
    NotAFace(Vec<u32>),
    #[error("no facet path between {0:?} and {1:?}")]
    NoPath(Vec<u32>, Vec<u32>),

    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("bad field configuration: {0}")]
    BadField(String),
    #[error("expected {expected} columns, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("column {col} outside 1..={max}")]
    BadColumn { col: usize, max: usize },
    #[error("division by zero")]
    DivByZero,
    #[error("zero polynomial has no initial monomial")]
    ZeroPolynomial,
    #[error("denominator vanished at the sample point")]
    DenominatorVanished,
    #[error("operation requires characteristic 2 (got {0})")]
    CharNot2(u32),

    #[error("degree {got} exceeds socle degree {max}")]
    DegreeTooHigh { got: usize, max: usize },
    #[error("cannot rewrite away from vertex {0}")]
    CannotAvoid(u32),
    #[error("rank unstable across seeds: {0}")]
    UnstableRank(String),
    #[error("{0:?} is not a codimension-1 face")]
    NotCodim1(Vec<u32>),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("operation requires odd dimension")]
    EvenDimension,
    #[error("complex is not the boundary of a simplex or argument shape mismatch: {0}")]
    NotSimplexBoundary(String),
    #[error("wrong parity: {0}")]
    WrongParity(String),
    #[error("face has size {got}, expected {expected}")]
    WrongFaceSize { expected: usize, got: usize },
    #[error("bad parity for identity family: {0}")]
    BadParity(String),
    #[error("no certificate found for {0}")]
    NoCertificateFound(String),
    #[error("complex is not a polygon")]
    NotPolygon,
    #[error("valuation of zero")]
    ZeroInput,
    #[error("form is singular")]
    SingularForm,
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
