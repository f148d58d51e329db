//! Exact arithmetic: rationals, bivariate Laurent polynomials, truncated
//! series in `t` and expression evaluation over series.

mod bilaurent;
pub mod den;
pub mod expr;
pub mod json;
mod series;

pub use bilaurent::BiLaurent;
pub use den::{Den, Factor, Var};
pub use expr::{eval_expr, parse_expr, Bindings, Expr};
pub use series::{TSeries, INF};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Exact rational number.
pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Rational square root when `c` is a perfect square.
pub fn rational_sqrt(c: &Q) -> Option<Q> {
    if c.is_negative() {
        return None;
    }
    if c.is_zero() {
        return Some(Q::zero());
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Q::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("leading coefficient not a unit")]
    NotUnit,
    #[error("no series square root")]
    NoSqrt,
    #[error("insufficient truncation: need t^{needed}, known below t^{have}")]
    InsufficientTruncation { needed: i64, have: i64 },
    #[error("exact series needs a truncation order for this operation")]
    ExactNeedsOrder,
    #[error("substitution failed: {0}")]
    Substitution(String),
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("in `{path}`: {source}")]
    Expr { path: String, source: Box<AlgebraError> },
}
