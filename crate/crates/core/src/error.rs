use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("too many matchings: {count} exceeds the enumeration cap {cap}")]
    TooMany { count: String, cap: u64 },
    #[error("not a perfect matching: {0}")]
    NotPerfect(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("sector p={p} has the wrong parity for m={m}")]
    BadParity { m: usize, p: usize },
    #[error("no closed form for m={0} (supported: 3, 4, 5)")]
    UnsupportedM(usize),
    #[error("degenerate root selection: {0}")]
    DegenerateRoots(String),
    #[error("eigen-residual {residual:e} exceeds tolerance {tol:e} (m={m}, p={p}, selection {selection:?})")]
    ResidualExceeded {
        m: usize,
        p: usize,
        selection: Vec<usize>,
        residual: f64,
        tol: f64,
    },
    #[error("Bethe vectors of sector p={p} (m={m}) have numerical rank {rank} < {dim}")]
    RankDeficient {
        m: usize,
        p: usize,
        rank: usize,
        dim: usize,
    },
    #[error("top Bethe vector for m={m} is not positive: {detail}")]
    PositivityViolation { m: usize, detail: String },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("site sets differ in size ({start} vs {end})")]
    SizeMismatch { start: usize, end: usize },
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("ordering violation: {0}")]
    OrderingViolation(String),
    #[error("quadrature tolerance {0:e} unreachable")]
    ToleranceUnreachable(f64),
}
