use std::fmt;

use serde::{Deserialize, Serialize};

/// A prime power `p^e` with `e >= 1`: the unit on which a multiplicative
/// function is free to take arbitrary values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub prime: u64,
    pub exponent: u32,
}

impl Site {
    pub fn new(prime: u64, exponent: u32) -> Self {
        debug_assert!(exponent >= 1 && is_prime(prime));
        Site { prime, exponent }
    }

    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

impl PartialOrd for Site {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Site {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value().cmp(&other.value())
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exponent)
    }
}

/// Canonical factorization: primes strictly ascending, exponents positive.
/// The empty factorization is 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.pairs.iter().map(|&(p, e)| Site {
            prime: p,
            exponent: e,
        })
    }

    pub fn product(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

// Gaps of the mod-30 wheel starting from 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut pairs = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut p = 7u64;
    let mut i = 0;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
        p += WHEEL[i];
        i = (i + 1) % WHEEL.len();
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Factorization { pairs }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).pairs == [(n, 1)]
}

pub fn prime_power(n: u64) -> Option<Site> {
    if n < 2 {
        return None;
    }
    match factorize(n).pairs.as_slice() {
        &[(p, e)] => Some(Site {
            prime: p,
            exponent: e,
        }),
        _ => None,
    }
}

/// All prime powers `<= bound` in ascending order.
pub fn prime_powers_up_to(bound: u64) -> Vec<Site> {
    let limit = bound as usize;
    let mut composite = vec![false; limit + 1];
    let mut sites = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for m in (p * p..=limit).step_by(p) {
            composite[m] = true;
        }
        let mut value = p as u64;
        let mut e = 1;
        while value <= bound {
            sites.push(Site {
                prime: p as u64,
                exponent: e,
            });
            match value.checked_mul(p as u64) {
                Some(v) => value = v,
                None => break,
            }
            e += 1;
        }
    }
    sites.sort();
    sites
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while n > 1 {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        out
    }

    #[test]
    fn small_cases() {
        assert_eq!(factorize(12).pairs, vec![(2, 2), (3, 1)]);
        assert!(factorize(1).pairs.is_empty());
        assert_eq!(factorize(9991).pairs, trial_division(9991));
        assert_eq!(factorize(9991).pairs, vec![(97, 1), (103, 1)]);
    }

    #[test]
    fn round_trip_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n);
            assert_eq!(f.product(), n);
            assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.pairs.iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        }
    }

    #[test]
    fn prime_power_table() {
        let sites: Vec<u64> = prime_powers_up_to(32).iter().map(Site::value).collect();
        assert_eq!(
            sites,
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
        );
        let table: Vec<u64> = prime_powers_up_to(2000).iter().map(Site::value).collect();
        for n in 1..=2000 {
            assert_eq!(prime_power(n).is_some(), table.binary_search(&n).is_ok());
        }
        assert_eq!(prime_power(128), Some(Site::new(2, 7)));
        assert_eq!(Site::new(2, 4).to_string(), "2^4");
    }
}
