//! Exact polynomial arithmetic over the rationals, monomial orders and the
//! textual grammar for polynomials and 1-forms.

mod form;
mod monomial;
mod parse;
mod polynomial;

pub use form::OneForm;
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_one_form, parse_polynomial, ParseError, ParseErrorKind};
pub use polynomial::{Polynomial, Term};

pub(crate) use polynomial::rational_to_f64;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;
