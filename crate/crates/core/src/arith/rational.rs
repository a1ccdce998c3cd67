use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `num/den`, or just `num` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let value: Rational = text.parse().ok()?;
    Some(value)
}
