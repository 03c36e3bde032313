use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{what} needs {needed} evaluations/elements, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: u128,
        cap: u128,
    },
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("zero has no multiplicative inverse or order")]
    ZeroElement,
    #[error("element encoding {0} is out of range for the field")]
    BadEncoding(u64),
    #[error("F_{{p^{m}}} is not a subfield of F_{{p^{n}}}")]
    NotSubfield { m: usize, n: usize },
    #[error("modulus is not a monic irreducible polynomial over F_{0}")]
    BadModulus(u64),
    #[error("division is not exact")]
    InexactDivision,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("degree requirement violated: {0}")]
    Degree(String),
    #[error("unsupported characteristic {0}")]
    Characteristic(u64),
    #[error("{d} does not divide the group order {order}")]
    NotDivisor { d: u64, order: u64 },
    #[error("coefficients do not lie in the subfield F_{q}")]
    NotInSubfield { q: u64 },
    #[error("polynomial does not split over the given field")]
    DoesNotSplit,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("no primitive candidate reproduces case {0}")]
    NoMatch(String),
    #[error("cannot parse {input:?}: {msg}")]
    Parse { input: String, msg: String },
    #[error("catalog data line {line}: {msg}")]
    Data { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, msg: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            msg: msg.into(),
        }
    }

    pub(crate) fn cap(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
