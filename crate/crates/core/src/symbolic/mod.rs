//! Exact multivariate polynomials and rational functions over the rationals.

mod parse;
mod poly;
mod ratfunc;

use thiserror::Error;

pub use parse::parse;
pub use poly::{q, qq, Monomial, Poly, Var};
pub use ratfunc::{RatFunc, EQUALITY_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("substitution sends denominator factor ({factor}) to zero")]
    ZeroDenominator { factor: String },
    #[error("pole: denominator factor ({factor}) vanishes at the point")]
    Pole { factor: String },
    #[error("no value given for variable {0}")]
    MissingVariable(String),
    #[error("the expression is identically zero")]
    Zero,
    #[error("expression depends on {0}, not only on N")]
    NotUnivariateInN(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Serde adapter writing a `BigRational` as a string such as `"-3/4"`.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}
