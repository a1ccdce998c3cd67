//! Exact arithmetic substrate: integer factorization, rationals, multivariate
//! polynomials over the rationals and partial multiplicative functions whose
//! unknown prime-power values are polynomial symbols.

mod factor;
mod partial;
mod poly;
mod rational;

pub use factor::{factorize, is_prime, prime_power, prime_powers_up_to, Factorization, Site};
pub use partial::{PartialFunction, SiteValue};
pub use poly::{Monomial, Poly, Symbol};
pub use rational::{format_rational, int, parse_rational, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("f({site}) is already {existing}, cannot assign {attempted}")]
    Conflict {
        site: Site,
        existing: String,
        attempted: String,
    },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("the zero polynomial has every value as a root")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("coefficient {0} is too large for divisor enumeration")]
    CoefficientTooLarge(String),
}
