//! Rational roots of univariate polynomials via the rational root theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, ArithError, Poly, Rational};

/// Every rational root of a univariate polynomial, ascending, without
/// multiplicity. A nonzero constant has none.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rational>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let (_, coefficients) = p.as_univariate().ok_or(ArithError::NotUnivariate)?;
    roots_of_coefficients(&coefficients)
}

/// Same as [`rational_roots`] on ascending coefficients.
pub fn roots_of_coefficients(coefficients: &[Rational]) -> Result<Vec<Rational>, ArithError> {
    let ints = integer_coefficients(coefficients);
    let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
        return Err(ArithError::ZeroPolynomial);
    };
    let high = ints.iter().rposition(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let reduced = &ints[low..=high];
    if reduced.len() > 1 {
        let constant = divisors(&reduced[0])?;
        let leading = divisors(&reduced[reduced.len() - 1])?;
        for num in &constant {
            for den in &leading {
                if num.gcd(den) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let candidate = Rational::new(BigInt::from(sign) * num, BigInt::from(*den));
                    if is_root(reduced, &candidate) {
                        roots.push(candidate);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Degree left after dividing out every rational root with full
/// multiplicity; nonzero means some roots are irrational or complex.
pub fn irrational_degree(coefficients: &[Rational], roots: &[Rational]) -> usize {
    let mut current: Vec<Rational> = coefficients.to_vec();
    while current.last().is_some_and(Zero::is_zero) {
        current.pop();
    }
    for root in roots {
        loop {
            if current.len() <= 1 || !evaluate(&current, root).is_zero() {
                break;
            }
            current = deflate(&current, root);
        }
    }
    current.len().saturating_sub(1)
}

pub fn evaluate(coefficients: &[Rational], x: &Rational) -> Rational {
    coefficients
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

// Synthetic division by (x - root); assumes root is a root.
fn deflate(coefficients: &[Rational], root: &Rational) -> Vec<Rational> {
    let d = coefficients.len() - 1;
    let mut out = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for i in (0..d).rev() {
        carry = &coefficients[i + 1] + carry * root;
        out[i] = carry.clone();
    }
    out
}

fn integer_coefficients(coefficients: &[Rational]) -> Vec<BigInt> {
    let den = coefficients
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coefficients
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect()
}

fn is_root(ints: &[BigInt], x: &Rational) -> bool {
    // sum a_i p^i q^(d-i) == 0 for x = p/q
    let d = ints.len() - 1;
    let p = x.numer();
    let q = x.denom();
    let mut total = BigInt::zero();
    let mut p_pow = BigInt::one();
    for (i, a) in ints.iter().enumerate() {
        total += a * &p_pow * num_traits::pow(q.clone(), d - i);
        p_pow *= p;
    }
    total.is_zero()
}

fn divisors(value: &BigInt) -> Result<Vec<u64>, ArithError> {
    let v = value
        .abs()
        .to_u64()
        .ok_or_else(|| ArithError::CoefficientTooLarge(value.to_string()))?;
    let mut out = vec![1u64];
    for (p, e) in factorize(v).pairs {
        let current = out.clone();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            out.extend(current.iter().map(|d| d * power));
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Symbol};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(coefficients: &[i64]) -> Poly {
        let c: Vec<Rational> = coefficients.iter().map(|&v| int(v)).collect();
        Poly::univariate(Symbol(0), &c)
    }

    #[test]
    fn examples() {
        assert_eq!(
            rational_roots(&poly(&[4, -5, 1])).unwrap(),
            vec![int(1), int(4)]
        );
        assert_eq!(
            rational_roots(&poly(&[4, -8, 3])).unwrap(),
            vec![q(2, 3), int(2)]
        );
        assert!(rational_roots(&poly(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(
            rational_roots(&Poly::zero()),
            Err(ArithError::ZeroPolynomial)
        );
        assert!(rational_roots(&poly(&[7])).unwrap().is_empty());
    }

    #[test]
    fn quadratic_formula_oracle() {
        // 3x^2 - 8x + 4: discriminant 64 - 48 = 16, roots (8 +- 4) / 6
        let disc = 8 * 8 - 4 * 3 * 4;
        assert_eq!(disc, 16);
        let expect = vec![q(8 - 4, 6), q(8 + 4, 6)];
        assert_eq!(rational_roots(&poly(&[4, -8, 3])).unwrap(), expect);
    }

    #[test]
    fn zero_root_and_irrational_remainder() {
        // x^3 - 2x = x (x^2 - 2)
        let c: Vec<Rational> = [0, -2, 0, 1].iter().map(|&v| int(v)).collect();
        let roots = roots_of_coefficients(&c).unwrap();
        assert_eq!(roots, vec![int(0)]);
        assert_eq!(irrational_degree(&c, &roots), 2);
        let c2: Vec<Rational> = [4, -5, 1].iter().map(|&v| int(v)).collect();
        assert_eq!(
            irrational_degree(&c2, &roots_of_coefficients(&c2).unwrap()),
            0
        );
        // (x - 1)^2 (x + 2)
        let c3: Vec<Rational> = [2, -3, 0, 1].iter().map(|&v| int(v)).collect();
        let r3 = roots_of_coefficients(&c3).unwrap();
        assert_eq!(r3, vec![int(-2), int(1)]);
        assert_eq!(irrational_degree(&c3, &r3), 0);
    }

    #[test]
    fn rational_coefficients() {
        let c = vec![q(1, 2), q(-3, 2), int(1)]; // (x - 1)(x - 1/2)
        assert_eq!(roots_of_coefficients(&c).unwrap(), vec![q(1, 2), int(1)]);
    }

    // Every p/q with |p| <= |a0| and 1 <= q <= |an|, tested directly.
    fn grid_roots(c: &[i64]) -> Vec<Rational> {
        let a0 = c[0].abs();
        let an = c[c.len() - 1].abs();
        let coefficients: Vec<Rational> = c.iter().map(|&v| int(v)).collect();
        let mut out: Vec<Rational> = Vec::new();
        for p in -a0..=a0 {
            for d in 1..=an {
                let x = q(p, d);
                if evaluate(&coefficients, &x) == int(0) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn matches_divisor_grid(roots in prop::collection::vec((-6i64..7, 1i64..4), 1..4), extra in prop::collection::vec(-5i64..6, 0..3), lead in 1i64..4) {
            // build lead * prod (d x - n) * (x^2 + extra stuff that may or may not factor)
            let mut c: Vec<Rational> = vec![int(lead)];
            for (n, d) in &roots {
                let factor = [int(-n), int(*d)];
                let mut next = vec![int(0); c.len() + 1];
                for (i, a) in c.iter().enumerate() {
                    for (j, b) in factor.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                c = next;
            }
            if !extra.is_empty() {
                let mut tail: Vec<Rational> = extra.iter().map(|&v| int(v)).collect();
                tail.push(int(1));
                let mut next = vec![int(0); c.len() + tail.len() - 1];
                for (i, a) in c.iter().enumerate() {
                    for (j, b) in tail.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                c = next;
            }
            let ints: Vec<i64> = c.iter().map(|r| r.to_integer().to_i64().unwrap()).collect();
            let found = roots_of_coefficients(&c).unwrap();
            for r in &found {
                prop_assert!(evaluate(&c, r).is_zero());
            }
            for (n, d) in &roots {
                prop_assert!(found.contains(&q(*n, *d)));
            }
            if ints[0] != 0 {
                prop_assert_eq!(found, grid_roots(&ints));
            }
        }
    }
}
