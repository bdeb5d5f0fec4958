use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("base field has no primitive {0}-th root of unity")]
    NoPthRoot(u32),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("characteristic too small for degree {0}")]
    CharacteristicTooSmall(usize),
    #[error("degree {0} exceeds the supported bound")]
    DegreeTooLarge(usize),
    #[error("polynomial is not p-power free (multiplicity {multiplicity} >= p = {p})")]
    NotPPowerFree { p: u32, multiplicity: u32 },
    #[error("DegreeNotDivisible: p = {p} does not divide {degree}")]
    DegreeNotDivisible { p: u32, degree: usize },
    #[error("characteristic of the base field equals p or p is not prime")]
    BadCharacteristic,
    #[error("zero divisor in the etale algebra (common factor {certificate})")]
    ZeroDivisor { certificate: String },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("factorization over this base field is unavailable: {0}")]
    FactorizationUnavailable(String),
    #[error("pair is not in Gamma: N(delta) = {norm}, n^p = {power}")]
    NotInGamma { norm: String, power: String },
    #[error("unsupported base field: {0}")]
    UnsupportedBase(String),
    #[error("class moduli differ")]
    ModulusMismatch,
    #[error("point data not on the curve: {0}")]
    NotOnCurve(String),
    #[error("divisor is not good: {0}")]
    NotGood(String),
    #[error("fiber factor does not divide z^p - f(r): {0}")]
    BadFiberFactor(String),
    #[error("fiber over a branch point")]
    RamifiedFiber,
    #[error("function has a zero or pole on the divisor support")]
    SupportOverlap,
    #[error("function has a zero or pole above infinity")]
    PoleAtInfinity,
    #[error("h(W) is not invertible in L")]
    ZeroAtW,
    #[error("reduction passed through a non-good divisor")]
    NonGoodIntermediate,
    #[error("q = {q} is not congruent to 1 modulo p = {p}")]
    BadResidue { q: u64, p: u32 },
    #[error("precision exceeded: {0}")]
    PrecisionExceeded(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("no good representative found: {0}")]
    NoRepresentative(String),
    #[error("outside the supported envelope: {0}")]
    Envelope(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
