//! One error type for the whole crate. Variants carry enough context to
//! print a useful one-line diagnostic; parse errors keep line/column.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// gcd of the empty set is not defined here.
    EmptyInput,
    /// congruence monoid with modulus 0.
    InvalidModulus,
    /// no element of the monoid is coprime to the given modulus
    /// (the gcd obstruction is reported).
    NoCoprimeExists { monoid_gcd: u64, modulus: u64 },
    /// prime factor set of 0 requested; every prime divides 0.
    ZeroHasAllPrimes,
    /// localization at an element of degree zero cannot carry the
    /// degree-zero subring construction.
    DegreeZeroDenominator,
    /// the zero derivation has no top homogeneous part.
    ZeroDerivation,
    /// slice decomposition requires apply(D, s) = 1.
    NotASlice,
    /// an operation needed a Nilpotent certificate but got Unknown or
    /// NotNilpotent.
    NilpotencyUnverified,
    /// e-invariants need at least two generator degrees.
    TooFewGenerators,
    /// Pham-Brieskorn data needs at least three exponents.
    TooFewExponents { got: usize },
    /// the construction requires saturation index e(B) = 1.
    NotSaturationIndexOne { e: u64 },
    /// membership query against an interval-valued prime set.
    PiNotExact,
    /// the jacobian determinant is not recognized as a unit of the
    /// extension, so the derivation cannot be transported.
    JacobianNotUnit { determinant: String },
    /// the chart element has degree sharing a factor with d.
    NotCoprimeChart { degree: i64, d: u32 },
    /// dehomogenization needs deg(h) != 0.
    DegreeZeroDehomogenization,
    /// h - 1 is not usable as a division rule and h is not a monomial.
    UnsupportedDenominator { reason: String },
    /// no exponent n within the bound makes f^n * D' integral.
    IntegralityBoundExceeded { bound: u32 },
    /// the derivation is not homogeneous (distinct component degrees listed).
    NotHomogeneous { degrees: Vec<i64> },
    /// every supplied kernel seed sits in degree zero.
    KernelInDegreeZero,
    /// a ring operation referenced a variable the ring does not declare.
    UnknownVariable { name: String },
    /// generic domain-level failure with a deterministic message.
    Domain(String),
    /// text that did not parse; 1-based line and column.
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    /// Stable identifier, used by the command line front-end so scripts can
    /// match on the error kind without parsing the message.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::InvalidModulus => "InvalidModulus",
            Error::NoCoprimeExists { .. } => "NoCoprimeExists",
            Error::ZeroHasAllPrimes => "ZeroHasAllPrimes",
            Error::DegreeZeroDenominator => "DegreeZeroDenominator",
            Error::ZeroDerivation => "ZeroDerivation",
            Error::NotASlice => "NotASlice",
            Error::NilpotencyUnverified => "NilpotencyUnverified",
            Error::TooFewGenerators => "TooFewGenerators",
            Error::TooFewExponents { .. } => "TooFewExponents",
            Error::NotSaturationIndexOne { .. } => "NotSaturationIndexOne",
            Error::PiNotExact => "PiNotExact",
            Error::JacobianNotUnit { .. } => "JacobianNotUnit",
            Error::NotCoprimeChart { .. } => "NotCoprimeChart",
            Error::DegreeZeroDehomogenization => "DegreeZeroDehomogenization",
            Error::UnsupportedDenominator { .. } => "UnsupportedDenominator",
            Error::IntegralityBoundExceeded { .. } => "IntegralityBoundExceeded",
            Error::NotHomogeneous { .. } => "NotHomogeneous",
            Error::KernelInDegreeZero => "KernelInDegreeZero",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::Domain(_) => "Domain",
            Error::Parse { .. } => "Parse",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "gcd of an empty set is undefined"),
            Error::InvalidModulus => write!(f, "congruence monoid modulus must be >= 1"),
            Error::NoCoprimeExists { monoid_gcd, modulus } => write!(
                f,
                "no monoid element is coprime to {modulus}: gcd obstruction {monoid_gcd}"
            ),
            Error::ZeroHasAllPrimes => write!(f, "0 is divisible by every prime"),
            Error::DegreeZeroDenominator => {
                write!(f, "localization element must have nonzero degree")
            }
            Error::ZeroDerivation => write!(f, "zero derivation has no top homogeneous part"),
            Error::NotASlice => write!(f, "element is not a slice: D(s) != 1"),
            Error::NilpotencyUnverified => {
                write!(f, "operation requires a Nilpotent certificate")
            }
            Error::TooFewGenerators => write!(f, "need at least two generator degrees"),
            Error::TooFewExponents { got } => {
                write!(f, "Pham-Brieskorn data needs n >= 3 exponents, got {got}")
            }
            Error::NotSaturationIndexOne { e } => {
                write!(f, "saturation index is {e}, construction needs 1")
            }
            Error::PiNotExact => write!(f, "prime set is an interval, not exact"),
            Error::JacobianNotUnit { determinant } => {
                write!(f, "jacobian determinant {determinant} is not a recognized unit")
            }
            Error::NotCoprimeChart { degree, d } => {
                write!(f, "chart degree {degree} is not coprime to {d}")
            }
            Error::DegreeZeroDehomogenization => {
                write!(f, "dehomogenization requires deg(h) != 0")
            }
            Error::UnsupportedDenominator { reason } => {
                write!(f, "unsupported dehomogenization element: {reason}")
            }
            Error::IntegralityBoundExceeded { bound } => {
                write!(f, "no integral clearing exponent found up to bound {bound}")
            }
            Error::NotHomogeneous { degrees } => {
                write!(f, "derivation is not homogeneous: component degrees {degrees:?}")
            }
            Error::KernelInDegreeZero => {
                write!(f, "no kernel seed of nonzero degree was supplied")
            }
            Error::UnknownVariable { name } => write!(f, "unknown variable {name}"),
            Error::Domain(msg) => write!(f, "{msg}"),
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
