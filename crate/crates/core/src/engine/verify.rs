use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::equation::{Provenance, DEFAULT_REPRESENTATION_CAP};
use super::run::EngineError;
use crate::arith::{factorize, prime_power, prime_powers_up_to, Rational};
use crate::repr::enumerate_representations;

/// An additivity equation that a table fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub provenance: Provenance,
    /// `f(n)` under the table.
    pub lhs: Rational,
    /// `sum f(a_i^2)` under the table.
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub checked: usize,
    pub first_violation: Option<Violation>,
}

/// `f(q) = q` for every prime power `q <= bound`.
pub fn identity_table(bound: u64) -> BTreeMap<u64, Rational> {
    prime_powers_up_to(bound)
        .into_iter()
        .map(|s| (s.value(), Rational::from_integer(s.value().into())))
        .collect()
}

/// Checks the multiplicative function induced by `table` against every
/// additivity equation for `k` and `n <= bound`, in generation order.
pub fn verify_assignment(
    table: &BTreeMap<u64, Rational>,
    k: usize,
    bound: u64,
) -> Result<VerifyReport, EngineError> {
    verify_assignment_with_cap(table, k, bound, DEFAULT_REPRESENTATION_CAP)
}

pub fn verify_assignment_with_cap(
    table: &BTreeMap<u64, Rational>,
    k: usize,
    bound: u64,
    cap: usize,
) -> Result<VerifyReport, EngineError> {
    if k < 2 || bound == 0 {
        return Err(EngineError::InvalidArguments(
            "verification needs k >= 2 and N >= 1".into(),
        ));
    }
    if let Some(&bad) = table.keys().find(|&&q| prime_power(q).is_none()) {
        return Err(EngineError::InvalidArguments(format!(
            "table key {bad} is not a prime power"
        )));
    }
    let missing: Vec<u64> = prime_powers_up_to(bound)
        .into_iter()
        .map(|s| s.value())
        .filter(|q| !table.contains_key(q))
        .collect();
    if !missing.is_empty() {
        return Err(EngineError::IncompleteTable { missing });
    }
    let values: Vec<Rational> = (0..=bound)
        .map(|n| {
            if n == 0 {
                return Rational::zero();
            }
            factorize(n)
                .sites()
                .fold(Rational::one(), |acc, s| acc * &table[&s.value()])
        })
        .collect();
    let mut checked = 0;
    for n in 1..=bound {
        for r in enumerate_representations(n, k, Some(cap)) {
            checked += 1;
            let rhs: Rational = r.parts.iter().map(|&a| &values[(a * a) as usize]).sum();
            if rhs != values[n as usize] {
                return Ok(VerifyReport {
                    ok: false,
                    checked,
                    first_violation: Some(Violation {
                        provenance: Provenance::Additivity { n, parts: r.parts },
                        lhs: values[n as usize].clone(),
                        rhs,
                    }),
                });
            }
        }
    }
    Ok(VerifyReport {
        ok: true,
        checked,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn identity_is_a_model() {
        for k in 2..=10 {
            let report = verify_assignment(&identity_table(2000), k, 2000).unwrap();
            assert!(report.ok, "k = {k}");
        }
    }

    // The first n <= 30 whose sums of three squares see a changed f(3).
    fn brute_first_violation(table: &BTreeMap<u64, Rational>) -> (u64, Vec<u64>) {
        let f = |n: u64| -> Rational {
            factorize(n)
                .sites()
                .fold(int(1), |acc, s| acc * &table[&s.value()])
        };
        for n in 1..=30u64 {
            for a in 1..=5u64 {
                for b in a..=5 {
                    for c in b..=5 {
                        if a * a + b * b + c * c == n && f(n) != f(a * a) + f(b * b) + f(c * c) {
                            return (n, vec![a, b, c]);
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn three_to_one_fails_first_at_brute_force_point() {
        let mut table = identity_table(30);
        table.insert(3, int(1));
        let report = verify_assignment(&table, 3, 30).unwrap();
        let v = report.first_violation.unwrap();
        let (n, parts) = brute_first_violation(&table);
        assert_eq!(v.provenance, Provenance::Additivity { n, parts });
        assert_eq!((n, v.lhs, v.rhs), (3, int(1), int(3)));
    }

    #[test]
    fn missing_sites_reported() {
        let mut table = identity_table(30);
        table.remove(&7);
        table.remove(&27);
        match verify_assignment(&table, 3, 30) {
            Err(EngineError::IncompleteTable { missing }) => assert_eq!(missing, vec![7, 27]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_prime_power_key_rejected() {
        let mut table = identity_table(10);
        table.insert(6, int(6));
        assert!(matches!(
            verify_assignment(&table, 3, 10),
            Err(EngineError::InvalidArguments(_))
        ));
    }
}
