use serde::Serialize;

use super::{is_expressible, is_square, ExpressibilitySieve, ReprError};

/// Integers up to `bound` that are not sums of `k` positive squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalSet {
    pub k: usize,
    pub bound: u64,
    pub members: Vec<u64>,
}

impl ExceptionalSet {
    pub fn from_sieve(sieve: &ExpressibilitySieve, k: usize) -> Self {
        let layer = sieve.layer(k);
        let members = (1..=sieve.bound())
            .filter(|&n| !layer.get(n as usize))
            .collect();
        ExceptionalSet {
            k,
            bound: sieve.bound(),
            members,
        }
    }
}

pub fn exceptional_set(k: usize, bound: u64) -> ExceptionalSet {
    assert!(
        k >= 3 && bound >= 1,
        "exceptional_set needs k >= 3 and bound >= 1"
    );
    ExceptionalSet::from_sieve(&ExpressibilitySieve::build(k, bound), k)
}

/// Same set as [`exceptional_set`], decided one `n` at a time by search.
pub fn exceptional_set_by_search(k: usize, bound: u64) -> ExceptionalSet {
    assert!(k >= 1 && bound >= 1);
    let members = (1..=bound).filter(|&n| !is_expressible(n, k)).collect();
    ExceptionalSet { k, bound, members }
}

/// Perfect squares up to `bound` that are not sums of three positive squares.
pub fn hurwitz_exceptions(bound: u64) -> Vec<u64> {
    assert!(bound >= 1);
    let sieve = ExpressibilitySieve::build(3, bound);
    (1..=bound.isqrt())
        .map(|a| a * a)
        .filter(|&m| !sieve.contains(m, 3))
        .collect()
}

/// `{4^s} ∪ {25 * 4^s}` up to `bound`, sorted.
pub fn hurwitz_closed_form(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for base in [1u64, 25] {
        let mut v = base;
        while v <= bound {
            out.push(v);
            v *= 4;
        }
    }
    out.sort_unstable();
    debug_assert!(out.iter().all(|&m| is_square(m)));
    out
}

/// Closed-form exceptions for sums of `k >= 4` positive squares, up to `bound`.
pub fn dubouis_reference_set(k: usize, bound: u64) -> Result<Vec<u64>, ReprError> {
    let mut out: Vec<u64> = match k {
        0..=3 => return Err(ReprError::NoClosedForm(k)),
        4 => {
            let mut v = vec![1, 3, 5, 9, 11, 17, 29, 41];
            for base in [2u64, 6, 14] {
                let mut m = base;
                while m <= bound {
                    v.push(m);
                    m *= 4;
                }
            }
            v
        }
        _ => {
            let k = k as u64;
            let mut v: Vec<u64> = (1..k).collect();
            v.extend([1, 2, 4, 5, 7, 10, 13].iter().map(|d| k + d));
            if k == 5 {
                v.push(33);
            }
            v
        }
    };
    out.retain(|&n| n <= bound);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_squares_to_forty() {
        let set = exceptional_set(5, 40);
        assert_eq!(set.members, vec![1, 2, 3, 4, 6, 7, 9, 10, 12, 15, 18, 33]);
        assert_eq!(dubouis_reference_set(5, 40).unwrap(), set.members);
    }

    #[test]
    fn four_squares_to_fifty() {
        let expect = vec![1, 2, 3, 5, 6, 8, 9, 11, 14, 17, 24, 29, 32, 41];
        assert_eq!(exceptional_set(4, 50).members, expect);
        assert_eq!(dubouis_reference_set(4, 50).unwrap(), expect);
    }

    #[test]
    fn six_and_seven() {
        let six = vec![1, 2, 3, 4, 5, 7, 8, 10, 11, 13, 16, 19];
        assert_eq!(exceptional_set(6, 25).members, six);
        assert_eq!(dubouis_reference_set(6, 25).unwrap(), six);
        let seven = vec![1, 2, 3, 4, 5, 6, 8, 9, 11, 12, 14, 17, 20];
        assert_eq!(dubouis_reference_set(7, 25).unwrap(), seven);
        assert_eq!(exceptional_set(7, 25).members, seven);
    }

    #[test]
    fn reference_rejects_small_k() {
        assert_eq!(
            dubouis_reference_set(3, 10),
            Err(ReprError::NoClosedForm(3))
        );
    }

    #[test]
    fn hurwitz_small() {
        assert_eq!(
            hurwitz_exceptions(1100),
            vec![1, 4, 16, 25, 64, 100, 256, 400, 1024]
        );
        assert_eq!(hurwitz_exceptions(3), vec![1]);
        assert_eq!(hurwitz_closed_form(1100), hurwitz_exceptions(1100));
    }

    #[test]
    fn sieve_and_search_agree() {
        for k in 3..=6 {
            assert_eq!(exceptional_set(k, 3000), exceptional_set_by_search(k, 3000));
        }
    }
}
