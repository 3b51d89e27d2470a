use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::arith::Rational;
use crate::expr::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    InvalidLiteral(String),
    Parse(ParseError),
    /// A partial result used as a divisor was exactly zero.
    ZeroPartialResult { index: u64 },
    /// The operation needs a Cauchy (or vanishing) certificate.
    NotMeasurable(String),
    /// Division by a number whose separation from zero could not be certified.
    NoApartness,
    /// A budget (precision, fuel or index cap) ran out before a decision.
    BudgetExhausted(String),
    Precondition(String),
    /// Predicate answered Holds above a point where it answered Fails.
    InconsistentPredicate { holds_at: Box<Rational>, fails_at: Box<Rational> },
    /// A declared continuity modulus was contradicted by an exact probe.
    ModulusViolation { at: Box<Rational>, other: Box<Rational> },
    NotInSet(Rational),
    Unsupported(String),
}

impl Error {
    pub fn inconsistent(holds_at: Rational, fails_at: Rational) -> Self {
        Error::InconsistentPredicate {
            holds_at: Box::new(holds_at),
            fails_at: Box::new(fails_at),
        }
    }

    pub fn modulus_violation(at: Rational, other: Rational) -> Self {
        Error::ModulusViolation {
            at: Box::new(at),
            other: Box::new(other),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::InvalidLiteral(s) => write!(f, "invalid rational literal `{s}`"),
            Error::Parse(e) => write!(f, "{e}"),
            Error::ZeroPartialResult { index } => {
                write!(f, "division by a zero partial result at index {index}")
            }
            Error::NotMeasurable(what) => write!(f, "not a measurable number: {what}"),
            Error::NoApartness => write!(f, "divisor is not certified apart from zero"),
            Error::BudgetExhausted(what) => write!(f, "budget exhausted: {what}"),
            Error::Precondition(what) => write!(f, "precondition failed: {what}"),
            Error::InconsistentPredicate { holds_at, fails_at } => write!(
                f,
                "inconsistent predicate: holds at {holds_at} but fails at smaller {fails_at}"
            ),
            Error::ModulusViolation { at, other } => {
                write!(f, "continuity modulus violated between {at} and {other}")
            }
            Error::NotInSet(x) => write!(f, "point {x} is not in the set"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
