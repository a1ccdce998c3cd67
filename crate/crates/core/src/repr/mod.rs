//! Representations of integers as sums of `k` positive squares.
//!
//! The enumerator walks nondecreasing part lists smallest-first so that a
//! capped result is always a prefix of the full lexicographic list. Batch
//! questions (exceptional sets up to a bound) go through
//! [`ExpressibilitySieve`] instead.

mod exceptions;
mod sieve;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use exceptions::{
    dubouis_reference_set, exceptional_set, exceptional_set_by_search, hurwitz_closed_form,
    hurwitz_exceptions, ExceptionalSet,
};
pub use sieve::{BitSet, ExpressibilitySieve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error("no closed-form exceptional set is known for k = {0} (needs k >= 4)")]
    NoClosedForm(usize),
}

/// `n = a_1^2 + ... + a_k^2` with `a_1 <= ... <= a_k`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Representation {
    pub n: u64,
    pub parts: Vec<u64>,
}

impl Representation {
    pub fn k(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Canonical representations of `n` into `k` positive squares, in
/// lexicographic order of the parts. `cap` keeps only a prefix.
pub fn enumerate_representations(n: u64, k: usize, cap: Option<usize>) -> Vec<Representation> {
    assert!(
        n >= 1 && k >= 1,
        "enumerate_representations needs n >= 1 and k >= 1"
    );
    let mut out = Vec::new();
    if cap == Some(0) {
        return out;
    }
    let mut parts = Vec::with_capacity(k);
    search(n, k, 1, &mut parts, &mut |parts| {
        out.push(Representation {
            n,
            parts: parts.to_vec(),
        });
        cap.is_some_and(|c| out.len() >= c)
    });
    out
}

pub fn is_expressible(n: u64, k: usize) -> bool {
    assert!(n >= 1 && k >= 1, "is_expressible needs n >= 1 and k >= 1");
    let mut parts = Vec::with_capacity(k);
    search(n, k, 1, &mut parts, &mut |_| true)
}

// Fills `slots` more parts, each >= `low`, summing (as squares) to
// `remaining`. Returns true once `visit` asks to stop.
fn search(
    remaining: u64,
    slots: usize,
    low: u64,
    parts: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]) -> bool,
) -> bool {
    if slots == 1 {
        if remaining >= low * low && is_square(remaining) {
            parts.push(isqrt(remaining));
            let stop = visit(parts);
            parts.pop();
            return stop;
        }
        return false;
    }
    let mut a = low;
    while a * a * slots as u64 <= remaining {
        parts.push(a);
        let stop = search(remaining - a * a, slots - 1, a, parts, visit);
        parts.pop();
        if stop {
            return true;
        }
        a += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64, k: usize) -> Vec<Vec<u64>> {
        // every nondecreasing tuple with parts <= sqrt(n)
        let top = isqrt(n);
        let mut out = Vec::new();
        let mut cur = vec![1u64; k];
        loop {
            if cur.windows(2).all(|w| w[0] <= w[1]) && cur.iter().map(|a| a * a).sum::<u64>() == n {
                out.push(cur.clone());
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < top {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    fn parts(n: u64, k: usize) -> Vec<Vec<u64>> {
        enumerate_representations(n, k, None)
            .into_iter()
            .map(|r| r.parts)
            .collect()
    }

    #[test]
    fn twenty_eight_into_four() {
        let got = parts(28, 4);
        assert_eq!(got, brute(28, 4));
        assert_eq!(
            got,
            vec![vec![1, 1, 1, 5], vec![1, 3, 3, 3], vec![2, 2, 2, 4]]
        );
    }

    #[test]
    fn twelve_into_three() {
        assert_eq!(parts(12, 3), brute(12, 3));
        assert_eq!(parts(12, 3), vec![vec![2, 2, 2]]);
    }

    #[test]
    fn k_ones() {
        for k in 1..=12 {
            assert_eq!(parts(k as u64, k), vec![vec![1; k]]);
        }
    }

    #[test]
    fn agrees_with_brute_force_small() {
        for k in 1..=4 {
            for n in 1..=120 {
                assert_eq!(parts(n, k), brute(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn cap_is_a_prefix() {
        let all = enumerate_representations(500, 4, None);
        assert!(all.len() > 5);
        for cap in 0..all.len() + 2 {
            let some = enumerate_representations(500, 4, Some(cap));
            assert_eq!(some.as_slice(), &all[..cap.min(all.len())]);
        }
    }

    #[test]
    fn expressibility_examples() {
        assert!(!is_expressible(33, 5));
        assert!(!is_expressible(4, 3));
        for k in 5..=20 {
            assert!(is_expressible(k as u64 + 3, k));
        }
    }

    #[test]
    fn every_representation_is_valid() {
        for k in 1..=6 {
            for n in 1..=10_000u64 {
                for r in enumerate_representations(n, k, Some(64)) {
                    assert_eq!(r.parts.iter().map(|a| a * a).sum::<u64>(), n);
                    assert!(r.parts.windows(2).all(|w| w[0] <= w[1]));
                    assert_eq!(r.k(), k);
                }
            }
        }
    }

    #[test]
    fn decision_agrees_with_enumeration_and_padding() {
        for k in 1..=10 {
            for n in 1..=2000u64 {
                let e = is_expressible(n, k);
                assert_eq!(e, !enumerate_representations(n, k, Some(1)).is_empty());
                if e {
                    assert!(is_expressible(n + 1, k + 1), "padding n={n} k={k}");
                }
            }
        }
    }
}
